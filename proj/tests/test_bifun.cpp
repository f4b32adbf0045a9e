#include <catch2/catch_amalgamated.hpp>

#include "bistable/bifun.hpp"

using namespace bistable;

namespace {

BiFunction table(const BiorderPtr& d, const BiorderPtr& c, std::vector<std::size_t> t) {
  return BiFunction{d, c, std::move(t)};
}

}  // namespace

TEST_CASE("identity on sigma is monotone and bistable") {
  auto f = identity(sigma());
  REQUIRE(is_monotone(f));
  REQUIRE(is_bistable(f));
}

TEST_CASE("binary meet on sigma^2 is monotone but not bistable") {
  auto s = sigma();
  std::vector<BiorderPtr> fs{s, s};
  auto p = product_many(fs);
  // f(x, y) = x meet y over the four points
  std::vector<std::size_t> t(4);
  for (std::size_t i = 0; i < 4; ++i) {
    auto c = product_split(fs, i);
    t[i] = (c[0] == 1 && c[1] == 1) ? 1 : 0;
  }
  auto f = table(p, s, t);
  REQUIRE(is_monotone(f));
  REQUIRE_FALSE(is_bistable(f));
}

TEST_CASE("the swap on sigma is not monotone") {
  auto f = table(sigma(), sigma(), {1, 0});
  REQUIRE_FALSE(is_monotone(f));
}

TEST_CASE("coherence is reflexive and separates id from the constants") {
  auto e = exponential(sigma(), sigma());
  REQUIRE(e.functions.size() == 3);
  const auto& cbot = e.functions[0];  // [0,0]
  const auto& id = e.functions[1];    // [0,1]
  const auto& ctop = e.functions[2];  // [1,1]
  REQUIRE(cbot.table == std::vector<std::size_t>{0, 0});
  REQUIRE(id.table == std::vector<std::size_t>{0, 1});
  REQUIRE(ctop.table == std::vector<std::size_t>{1, 1});
  REQUIRE(coherent(id, id));
  REQUIRE(coherent(cbot, ctop));
  REQUIRE_FALSE(coherent(cbot, id));
}

TEST_CASE("hom set counts") {
  REQUIRE(hom_set(sigma(), sigma()).size() == 3);
  auto b = bilift(flat(2));
  REQUIRE(hom_set(unit_biorder(), b).size() == b->size());
  REQUIRE(hom_set(product(sigma(), sigma()), sigma()).size() == 4);
}

TEST_CASE("hom set enumeration respects the budget") {
  REQUIRE_THROWS_AS(hom_set(product(sigma(), sigma()), sigma(), 8), Error);
  try {
    hom_set(product(sigma(), sigma()), sigma(), 8);
  } catch (const Error& e) {
    REQUIRE(e.code() == "enumeration-budget-exceeded");
  }
}

TEST_CASE("exponential of sigma by sigma") {
  auto e = exponential(sigma(), sigma());
  REQUIRE(e.biorder->size() == 3);
  REQUIRE(e.biorder->classes.size() == 2);
  REQUIRE(validate(*e.biorder).empty());
}

TEST_CASE("exponential of sigma^2 by sigma") {
  auto e = exponential(product(sigma(), sigma()), sigma());
  REQUIRE(e.biorder->size() == 4);
  REQUIRE(e.biorder->classes.size() == 3);
  REQUIRE(validate(*e.biorder).empty());
}

TEST_CASE("exponential of unit by sigma is isomorphic to sigma") {
  auto e = exponential(unit_biorder(), sigma());
  REQUIRE(is_isomorphic(*e.biorder, *sigma()));
}

TEST_CASE("pointwise meets in the exponential") {
  auto e = exponential(product(sigma(), sigma()), sigma());
  const auto& b = e.biorder;
  for (const auto& cl : b->classes)
    for (std::size_t i : cl)
      for (std::size_t j : cl) {
        auto m = meet(b, i, j);
        for (std::size_t x = 0; x < e.dom->size(); ++x) {
          auto want = meet(e.cod, e.functions[i](x), e.functions[j](x)).index;
          REQUIRE(e.functions[m.index](x) == want);
        }
      }
}

TEST_CASE("ccc structure maps") {
  auto s = sigma();
  auto id = identity(s);
  auto e = exponential(s, s);
  SECTION("compose with identity") {
    for (const auto& f : e.functions) {
      REQUIRE(compose(id, f) == f);
      REQUIRE(compose(f, id) == f);
    }
  }
  SECTION("hom set closed under composition") {
    for (const auto& f : e.functions)
      for (const auto& g : e.functions) {
        auto h = compose(f, g);
        REQUIRE(is_monotone(h));
        REQUIRE(is_bistable(h));
      }
  }
  SECTION("pair then project") {
    for (const auto& f : e.functions)
      for (const auto& g : e.functions) {
        auto p = pair(f, g);
        std::vector<BiorderPtr> fs{s, s};
        REQUIRE(compose(p, proj(fs, 1)) == f);
        REQUIRE(compose(p, proj(fs, 2)) == g);
      }
  }
  SECTION("type mismatch is an error") {
    auto u = identity(unit_biorder());
    REQUIRE_THROWS_AS(compose(id, u), Error);
  }
}

TEST_CASE("curry and uncurry are mutually inverse") {
  auto s = sigma();
  std::vector<BiorderPtr> fs{s, s};
  auto p = product_many(fs);
  auto all = hom_set(p, s);
  for (const auto& f : all) {
    auto [cf, e] = curry(f, s, s);
    REQUIRE(is_monotone(cf));
    REQUIRE(is_bistable(cf));
    REQUIRE(uncurry(cf, e, s) == f);
  }
}

TEST_CASE("curry of the second projection is the constant identity") {
  auto s = sigma();
  std::vector<BiorderPtr> fs{s, s};
  auto p2 = proj(fs, 2);
  auto [cf, e] = curry(p2, s, s);
  std::size_t id_idx = e.index_of(identity(s));
  REQUIRE(cf.table == std::vector<std::size_t>{id_idx, id_idx});
}

TEST_CASE("bistrictness") {
  auto s = sigma();
  REQUIRE(is_bistrict(identity(s)));
  REQUIRE_FALSE(is_bistrict(table(s, s, {1, 1})));
  REQUIRE_THROWS_AS(is_bistrict(identity(flat(2))), Error);
}

TEST_CASE("strictness indices on sigma^2") {
  auto s = sigma();
  std::vector<BiorderPtr> fs{s, s};
  REQUIRE(strictness_indices(proj(fs, 1), fs) == std::set<std::size_t>{1});
  auto p = product_many(fs);
  std::vector<std::size_t> ctop(p->size(), 1);
  REQUIRE(strictness_indices(table(p, s, ctop), fs).empty());
}

TEST_CASE("every bistrict member of hom(sigma^3, sigma) has one index") {
  auto s = sigma();
  std::vector<BiorderPtr> fs{s, s, s};
  auto p = product_many(fs);
  std::size_t bistrict_count = 0;
  for (const auto& f : hom_set(p, s)) {
    if (!is_bistrict(f)) continue;
    ++bistrict_count;
    REQUIRE(strictness_indices(f, fs).size() == 1);
  }
  REQUIRE(bistrict_count == 3);  // the three projections
}

TEST_CASE("hom membership is exactly the monotone bistable tables") {
  // brute force over every total table, for small dom/cod pairs
  std::vector<std::pair<BiorderPtr, BiorderPtr>> cases = {
      {sigma(), sigma()},
      {product(sigma(), sigma()), sigma()},
      {sigma(), bilift(flat(2))},
      {exponential(sigma(), sigma()).biorder, sigma()},
  };
  for (auto& [dom, cod] : cases) {
    auto hs = hom_set(dom, cod);
    std::set<std::vector<std::size_t>> members;
    for (const auto& f : hs) members.insert(f.table);
    std::vector<std::size_t> t(dom->size(), 0);
    while (true) {
      BiFunction f{dom, cod, t};
      bool pass = is_monotone(f) && is_bistable(f);
      REQUIRE(pass == (members.count(t) == 1));
      std::size_t i = dom->size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++t[i] < cod->size()) { done = false; break; }
        t[i] = 0;
        if (i == 0) break;
      }
      if (done) break;
    }
  }
}

TEST_CASE("one-point factors admit non-unique strictness indices") {
  auto u = unit_biorder();
  std::vector<BiorderPtr> fs{u, u};
  // the unique map unit x unit -> unit is i-strict for every i
  auto p = product_many(fs);
  BiFunction f{p, u, std::vector<std::size_t>(p->size(), 0)};
  REQUIRE(strictness_indices(f, fs) == std::set<std::size_t>{1, 2});
  // with a nontrivial factor the index set collapses again
  std::vector<BiorderPtr> gs{u, sigma()};
  REQUIRE(strictness_indices(proj(gs, 2), gs) == std::set<std::size_t>{2});
}
