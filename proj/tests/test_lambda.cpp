#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <optional>
#include <random>

#include "bistable/lambda.hpp"
#include "bistable/term.hpp"

using namespace bistable;

TEST_CASE("typechecking basics") {
  REQUIRE(type_equal(typecheck({}, parse_term("(lam (x S) x)")), parse_type("(-> S S)")));
  REQUIRE(type_equal(typecheck({}, parse_term("top")), t_sigma()));
  REQUIRE_THROWS_AS(typecheck({}, parse_term("(pi 3 (tuple top bot))")), Error);
}

TEST_CASE("parser and printer round-trip") {
  for (const char* src :
       {"top", "bot", "(lam (x S) x)", "((lam (x S) x) top)",
        "(lam (f (-> S S)) (f bot))", "(tuple top bot top)",
        "(pi 2 (tuple top bot))", "(lam (p (* S S)) (pi 1 p))",
        "(lam (p (* (-> S S) S)) ((pi 1 p) (pi 2 p)))"}) {
    TermPtr t = parse_term(src);
    REQUIRE(show_term(t) == src);
    REQUIRE(show_term(parse_term(show_term(t))) == src);
  }
}

TEST_CASE("denoted types have the expected carriers") {
  DenoteCtx ctx;
  REQUIRE(ctx.den(parse_type("(-> S S)")).bi->size() == 3);
  auto p = ctx.den(parse_type("(* S S)"));
  REQUIRE(p.bi->size() == 4);
  REQUIRE(p.bi->classes.size() == 1);
  REQUIRE(ctx.den(parse_type("(*)")).bi->size() == 1);
}

TEST_CASE("denotation of simple terms") {
  DenoteCtx ctx;
  auto top_val = denote_element(ctx, parse_term("((lam (x S) x) top)"));
  REQUIRE(top_val.element.index == 1);

  auto pi1 = denote_element(ctx, parse_term("(lam (x (* S S)) (pi 1 x))"));
  // locate pi_1 among hom(sigma^2, sigma)
  auto e = exponential(product(sigma(), sigma()), sigma());
  std::vector<BiorderPtr> fs{sigma(), sigma()};
  std::size_t want = e.index_of(proj(fs, 1));
  REQUIRE(pi1.element.index == want);

  // \f. f bot applied to the identity index gives bot
  auto fbot = denote_bifun(ctx, parse_term("(lam (f (-> S S)) (f bot))"));
  auto es = exponential(sigma(), sigma());
  REQUIRE(fbot.table[es.index_of(identity(sigma()))] == 0);
}

TEST_CASE("denotation in an environment") {
  DenoteCtx ctx;
  TypeEnv tenv{{"u", t_sigma()}};
  std::map<std::string, Element> env{{"u", Element{sigma(), 1}}};
  auto v = denote_element(ctx, parse_term("((lam (x S) x) u)"), tenv, env);
  REQUIRE(v.element.index == 1);
}

namespace {

// small random well-typed term generator for the beta/eta/pi soundness test
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }

  TypePtr type(int depth) {
    if (depth == 0) return t_sigma();
    switch (pick(3)) {
      case 0: return t_sigma();
      case 1: return t_prod({type(depth - 1), type(depth - 1)});
      default: return t_arrow(type(depth - 1), type(depth - 1));
    }
  }

  TermPtr term(const TypePtr& want, std::vector<std::pair<std::string, TypePtr>>& scope,
               int depth) {
    std::vector<TermPtr> leaves;
    for (auto& [n, t] : scope)
      if (type_equal(t, want)) leaves.push_back(var(n));
    if (depth == 0 || pick(3) == 0) {
      switch (want->kind) {
        case Type::Kind::Sigma:
          if (!leaves.empty() && pick(2) == 0) return leaves[pick(leaves.size())];
          return pick(2) ? top() : bot();
        case Type::Kind::Prod: {
          std::vector<TermPtr> items;
          for (const auto& it : want->items) items.push_back(term(it, scope, 0));
          return tuple(items);
        }
        case Type::Kind::Arrow: {
          std::string x = "v" + std::to_string(scope.size());
          scope.emplace_back(x, want->from);
          TermPtr b = term(want->to, scope, 0);
          scope.pop_back();
          return lam(x, want->from, b);
        }
        default:
          return top();
      }
    }
    switch (pick(4)) {
      case 0: {  // redex: (lam x:A. body) arg
        TypePtr a = type(1);
        std::string x = "v" + std::to_string(scope.size());
        scope.emplace_back(x, a);
        TermPtr b = term(want, scope, depth - 1);
        scope.pop_back();
        return app(lam(x, a, b), term(a, scope, depth - 1));
      }
      case 1: {  // projection of a tuple
        TermPtr other = term(t_sigma(), scope, depth - 1);
        TermPtr mine = term(want, scope, depth - 1);
        return proj(1, tuple({mine, other}));
      }
      default:
        return term(want, scope, 0);
    }
  }
};

std::optional<TermPtr> beta_step(const TermPtr& t) {
  if (t->kind == Term::Kind::App && t->kids[0]->kind == Term::Kind::Lam) {
    const auto& l = t->kids[0];
    std::function<TermPtr(const TermPtr&)> sub = [&](const TermPtr& b) -> TermPtr {
      if (b->kind == Term::Kind::Var) return b->name == l->name ? t->kids[1] : b;
      if (b->kind == Term::Kind::Lam && b->name == l->name) return b;
      Term c = *b;
      for (auto& k : c.kids) k = sub(k);
      return mk(std::move(c));
    };
    return sub(l->kids[0]);
  }
  if (t->kind == Term::Kind::Proj && t->kids[0]->kind == Term::Kind::Tuple)
    return t->kids[0]->kids[t->idx - 1];
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    auto r = beta_step(t->kids[i]);
    if (r) {
      Term c = *t;
      c.kids[i] = *r;
      return mk(std::move(c));
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("denotation is invariant under beta, eta and projection laws") {
  DenoteCtx ctx;
  Gen gen(20240817);
  int checked = 0;
  for (int it = 0; it < 60; ++it) {
    TypePtr ty = gen.type(2);
    std::vector<std::pair<std::string, TypePtr>> scope;
    TermPtr m = gen.term(ty, scope, 2);
    auto d0 = denote_element(ctx, m);
    TermPtr cur = m;
    for (int s = 0; s < 20; ++s) {
      auto nxt = beta_step(cur);
      if (!nxt) break;
      cur = *nxt;
      REQUIRE(denote_element(ctx, cur).element.index == d0.element.index);
      ++checked;
    }
    if (ty->kind == Type::Kind::Arrow) {
      TermPtr etam = lam("fresh_eta", ty->from, app(m, var("fresh_eta")));
      REQUIRE(denote_element(ctx, etam).element.index == d0.element.index);
      ++checked;
    }
    if (ty->kind == Type::Kind::Prod) {
      std::vector<TermPtr> items;
      for (std::size_t i = 1; i <= ty->items.size(); ++i) items.push_back(proj(i, m));
      REQUIRE(denote_element(ctx, tuple(items)).element.index == d0.element.index);
      ++checked;
    }
  }
  REQUIRE(checked > 30);
}

TEST_CASE("fo_define on first-order tables") {
  auto s = sigma();
  std::vector<BiorderPtr> fs{s, s};
  SECTION("second projection") {
    auto f = proj(fs, 2);
    TermPtr t = fo_define(f, 2, 1);
    REQUIRE(show_term(t) == "(lam (x (* S S)) (pi 2 x))");
  }
  SECTION("constant top") {
    auto p = product_many(fs);
    BiFunction f{p, s, std::vector<std::size_t>(4, 1)};
    REQUIRE(show_term(fo_define(f, 2, 1)) == "(lam (x (* S S)) top)");
  }
  SECTION("pair of first projection and constant bottom") {
    auto p = product_many(fs);
    auto target = product_many({s, s});
    BiFunction f{p, target, {}};
    for (std::size_t x = 0; x < 4; ++x) {
      auto c = product_split(fs, x);
      f.table.push_back(product_index(fs, {c[0], 0}));
    }
    REQUIRE(show_term(fo_define(f, 2, 2)) == "(lam (x (* S S)) (tuple (pi 1 x) bot))");
  }
}

TEST_CASE("retraction exponents match the construction") {
  auto r = retraction_terms(parse_type("(-> (-> (* S S) S) S)"));
  REQUIRE(r.n == 3);
  REQUIRE(r.m == 4);
  auto rs = retraction_terms(t_sigma());
  REQUIRE(rs.n == 0);
  REQUIRE(rs.m == 1);
}

namespace {

/// inj;proj denotes the identity at T.
bool retraction_round_trips(const DenoteCtx& ctx, const TypePtr& t) {
  RetractionPair r = retraction_terms(t);
  REQUIRE(type_equal(typecheck({}, r.inj), t_arrow(t, r.target)));
  REQUIRE(type_equal(typecheck({}, r.proj), t_arrow(r.target, t)));
  TermPtr round = lam("e", t, app(r.proj, app(r.inj, var("e"))));
  BiFunction f = denote_bifun(ctx, round);
  return f == identity(ctx.den(t).bi);
}

}  // namespace

TEST_CASE("retraction terms round-trip semantically") {
  DenoteCtx ctx;
  for (const char* ty : {"S", "(-> S S)", "(-> (* S S) S)", "(-> (-> S S) S)",
                         "(-> S (-> S S))", "(* S (-> S S))"}) {
    INFO(ty);
    REQUIRE(retraction_round_trips(ctx, parse_type(ty)));
  }
}

TEST_CASE("every element of small types is definable") {
  DenoteCtx ctx;
  for (const char* ty : {"S", "(-> S S)", "(-> (* S S) S)", "(-> (-> (* S S) S) S)"}) {
    INFO(ty);
    TypePtr t = parse_type(ty);
    const auto& d = ctx.den(t);
    for (std::size_t i = 0; i < d.bi->size(); ++i) {
      TermPtr m = define_element(ctx, Element{d.bi, i}, t);
      REQUIRE(denote_element(ctx, m).element.index == i);
    }
  }
}

TEST_CASE("bottom is definable at every listed type") {
  DenoteCtx ctx;
  for (const char* ty : {"S", "(-> S S)", "(-> (-> S S) S)"}) {
    TypePtr t = parse_type(ty);
    const auto& d = ctx.den(t);
    auto lo = least_element(*d.bi);
    REQUIRE(lo.has_value());
    TermPtr m = define_element(ctx, Element{d.bi, *lo}, t);
    REQUIRE(denote_element(ctx, m).element.index == *lo);
  }
}

TEST_CASE("theory equality is semantic equality") {
  DenoteCtx ctx;
  REQUIRE(theory_equal(ctx, parse_term("((lam (x S) x) top)"), parse_term("top")));
  REQUIRE_FALSE(theory_equal(ctx, parse_term("(lam (x S) top)"), parse_term("(lam (x S) x)")));
}

TEST_CASE("the defining axioms hold for n up to 3") {
  DenoteCtx ctx;
  for (std::size_t n = 1; n <= 3; ++n) {
    INFO(n);
    REQUIRE(axiom_check(ctx, n));
  }
}

TEST_CASE("strict functionals evaluate their argument at the projection tuple") {
  // for every bistrict f in hom((sigma^n => sigma), sigma) and every e:
  // f(e) = e(<f(pi_1), ..., f(pi_n)>)
  auto s = sigma();
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<BiorderPtr> fs(n, s);
    auto dom = exponential(product_many(fs), s);
    for (const auto& f : hom_set(dom.biorder, s)) {
      BiFunction fb{dom.biorder, s, f.table};
      if (!is_bistrict(fb)) continue;
      std::vector<std::size_t> proj_vals;
      for (std::size_t i = 1; i <= n; ++i)
        proj_vals.push_back(fb(dom.index_of(proj(fs, i))));
      std::size_t tuple_idx = product_index(fs, proj_vals);
      for (std::size_t ei = 0; ei < dom.biorder->size(); ++ei)
        REQUIRE(fb(ei) == dom.functions[ei](tuple_idx));
    }
  }
}

TEST_CASE("lambda typecheck rejects the nat fragment") {
  REQUIRE_THROWS_AS(lambda_typecheck({}, parse_term("(succ 0)")), Error);
  REQUIRE(type_equal(lambda_typecheck({}, parse_term("(lam (x S) x)")),
                     parse_type("(-> S S)")));
}

TEST_CASE("budget errors surface as first-class failures") {
  DenoteCtx tiny(8, 64);
  // the function space over the cutoff numerals needs 2^10 candidates
  REQUIRE_THROWS_AS(denote_element(tiny, parse_term("(lam (n nat) top)")), Error);
  try {
    denote_element(tiny, parse_term("(lam (n nat) top)"));
  } catch (const Error& e) {
    REQUIRE(e.code() == "enumeration-budget-exceeded");
  }
}

TEST_CASE("carrier counts match hand derivations") {
  DenoteCtx ctx;
  // (S => S) => S: bottom, top, and evaluation at each of the two constants
  REQUIRE(ctx.den(parse_type("(-> (-> S S) S)")).bi->size() == 4);
  // ((* S S) => S) => S: bottom, top, and evaluation at <c1,c2>
  REQUIRE(ctx.den(parse_type("(-> (-> (* S S) S) S)")).bi->size() == 6);
  // ((* S S S) => S) => S
  REQUIRE(ctx.den(parse_type("(-> (-> (* S S S) S) S)")).bi->size() == 10);
  // S => S => S is the curried two-argument space
  REQUIRE(ctx.den(parse_type("(-> S (-> S S))")).bi->size() == 4);
}
