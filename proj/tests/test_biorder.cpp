#include <catch2/catch_amalgamated.hpp>

#include "bistable/biorder.hpp"

using namespace bistable;

TEST_CASE("sigma is the two-point biorder with one class") {
  auto s = sigma();
  REQUIRE(s->size() == 2);
  REQUIRE(s->classes.size() == 1);
  REQUIRE(validate(*s).empty());
  REQUIRE(s->le(0, 1));
  REQUIRE_FALSE(s->le(1, 0));
  REQUIRE(meet(s, 0, 1).index == 0);
  REQUIRE(join(s, 0, 1).index == 1);
}

TEST_CASE("sigma equals bilift of the empty biorder") {
  REQUIRE(*sigma() == *bilift(empty_biorder()));
}

TEST_CASE("incomparable pair in one class fails validation") {
  auto b = make_biorder({"x", "y"}, {}, {{0, 1}});
  auto diags = validate(*b);
  REQUIRE_FALSE(diags.empty());
  bool saw_meet = false;
  for (const auto& d : diags)
    if (d.code == "no-class-meet" || d.code == "no-class-join") saw_meet = true;
  REQUIRE(saw_meet);
}

TEST_CASE("validate reports multiple violations") {
  // not reflexive is impossible through make_biorder (it closes), so break
  // the partition and the lattice at once
  auto b = std::make_shared<FiniteBiorder>();
  b->elements = {"x", "y"};
  b->leq = {{true, false}, {false, true}};
  b->classes = {{0, 1}, {0, 1}};  // both elements counted twice
  b->class_of = {0, 0};
  auto diags = validate(*b);
  REQUIRE(diags.size() >= 2);
}

TEST_CASE("bilift of unit is bot < * < top with two classes") {
  auto b = bilift(unit_biorder());
  REQUIRE(b->size() == 3);
  REQUIRE(b->classes.size() == 2);
  REQUIRE(validate(*b).empty());
  REQUIRE(b->le(0, 1));
  REQUIRE(b->le(1, 2));
  REQUIRE(b->coherent(0, 2));
  REQUIRE_FALSE(b->coherent(0, 1));
}

TEST_CASE("bilift of flat(3) has five elements and four classes") {
  auto b = bilift(flat(3));
  REQUIRE(b->size() == 5);
  REQUIRE(b->classes.size() == 4);
  REQUIRE(validate(*b).empty());
}

TEST_CASE("bilift of flat(k) is pointed and valid for k <= 16") {
  for (std::size_t k = 0; k <= 16; ++k) {
    auto b = bilift(flat(k));
    REQUIRE(validate(*b).empty());
    REQUIRE(is_pointed(*b));
  }
}

TEST_CASE("flat(0) is empty and flat(1) is the unit") {
  REQUIRE(flat(0)->size() == 0);
  REQUIRE(*flat(0) == *empty_biorder());
  REQUIRE(flat(1)->size() == 1);
  REQUIRE(is_isomorphic(*flat(1), *unit_biorder()));
}

TEST_CASE("product of sigma with sigma: four elements, one class") {
  auto p = product(sigma(), sigma());
  REQUIRE(p->size() == 4);
  REQUIRE(p->classes.size() == 1);
  REQUIRE(validate(*p).empty());
}

TEST_CASE("product with unit is isomorphic to the factor") {
  auto a = bilift(flat(2));
  REQUIRE(is_isomorphic(*product(a, unit_biorder()), *a));
}

TEST_CASE("coproduct of sigma with sigma: four elements, two classes") {
  auto c = coproduct(sigma(), sigma());
  REQUIRE(c->size() == 4);
  REQUIRE(c->classes.size() == 2);
  REQUIRE(validate(*c).empty());
  // cross-summand incoherence and unrelatedness
  REQUIRE_FALSE(c->coherent(0, 2));
  REQUIRE_FALSE(c->le(0, 2));
  REQUIRE_FALSE(c->le(2, 0));
}

TEST_CASE("meet is idempotent and componentwise on products") {
  auto s = sigma();
  REQUIRE(meet(s, 1, 1).index == 1);
  std::vector<BiorderPtr> fs{s, s};
  auto p = product_many(fs);
  std::size_t bt = product_index(fs, {0, 1});  // (bot, top)
  std::size_t tb = product_index(fs, {1, 0});  // (top, bot)
  REQUIRE(meet(p, bt, tb).index == product_index(fs, {0, 0}));
  REQUIRE(join(p, bt, tb).index == product_index(fs, {1, 1}));
}

TEST_CASE("meet of an incoherent pair is an error") {
  auto c = coproduct(sigma(), sigma());
  REQUIRE_THROWS_AS(meet(c, 0, 2), Error);
  try {
    meet(c, 0, 2);
  } catch (const Error& e) {
    REQUIRE(e.code() == "incoherent-pair");
  }
}

TEST_CASE("meet and join bracket their arguments and stay in class") {
  auto b = bilift(flat(2));
  for (std::size_t x = 0; x < b->size(); ++x)
    for (std::size_t y = 0; y < b->size(); ++y) {
      if (!b->coherent(x, y)) continue;
      auto m = meet(b, x, y), j = join(b, x, y);
      REQUIRE(b->le(m.index, x));
      REQUIRE(b->le(m.index, y));
      REQUIRE(b->le(x, j.index));
      REQUIRE(b->le(y, j.index));
      REQUIRE(b->coherent(m.index, x));
      REQUIRE(b->coherent(j.index, x));
    }
}

TEST_CASE("the two presentations round-trip") {
  std::vector<BiorderPtr> pool{sigma(), unit_biorder(), bilift(flat(2)),
                               product(sigma(), sigma()), coproduct(sigma(), sigma()),
                               bilift(bilift(empty_biorder()))};
  for (const auto& b : pool) {
    auto lb = to_bistable_order(*b);
    std::vector<std::pair<std::size_t, std::size_t>> le;
    for (std::size_t i = 0; i < b->size(); ++i)
      for (std::size_t j = 0; j < b->size(); ++j)
        if (b->le(i, j)) le.emplace_back(i, j);
    auto back = from_bistable_order(b->elements, le, lb);
    REQUIRE(*back == *b);
  }
}

TEST_CASE("sigma's bistable order equals its extensional order") {
  auto s = sigma();
  auto lb = to_bistable_order(*s);
  REQUIRE(lb.size() == 3);  // reflexive pairs plus bot <= top
}

TEST_CASE("from_bistable_order rejects non-bistable input") {
  // leqB relating elements with no common glb in leqE
  REQUIRE_THROWS_AS(
      from_bistable_order({"x", "y"}, {}, {{0, 1}}), Error);
  try {
    from_bistable_order({"x", "y"}, {}, {{0, 1}});
  } catch (const Error& e) {
    REQUIRE(e.code() == "not-a-bistable-order");
  }
}

TEST_CASE("product meets and joins are componentwise for all coherent pairs") {
  std::vector<BiorderPtr> fs{bilift(flat(2)), sigma()};
  auto p = product_many(fs);
  for (std::size_t x = 0; x < p->size(); ++x)
    for (std::size_t y = 0; y < p->size(); ++y) {
      if (!p->coherent(x, y)) continue;
      auto cx = product_split(fs, x), cy = product_split(fs, y);
      std::vector<std::size_t> want_m, want_j;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        want_m.push_back(meet(fs[i], cx[i], cy[i]).index);
        want_j.push_back(join(fs[i], cx[i], cy[i]).index);
      }
      REQUIRE(meet(p, x, y).index == product_index(fs, want_m));
      REQUIRE(join(p, x, y).index == product_index(fs, want_j));
    }
}

TEST_CASE("bounded above without bounded below is rejected") {
  // a, b both below c in the bistable order, but with no common lower bound
  REQUIRE_THROWS_AS(
      from_bistable_order({"a", "b", "c"}, {{0, 2}, {1, 2}}, {{0, 2}, {1, 2}}), Error);
}
