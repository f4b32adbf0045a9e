#include <catch2/catch_amalgamated.hpp>

#include "bistable/corpus.hpp"
#include "bistable/cps.hpp"
#include "bistable/omega.hpp"

using namespace bistable;

namespace {
constexpr std::size_t kFuel = 400000;
}

TEST_CASE("pointedness restriction in the type system") {
  REQUIRE_THROWS_AS(otypecheck({}, parse_oterm("(lam (x N) x)")), Error);
  OTypePtr u = o_universal();
  REQUIRE(otype_wellformed(u));
  REQUIRE(show_otype(u) == "(-> N (-> (-> N S) S))");
  REQUIRE(otypecheck({}, parse_oterm("(if0n 0 top bot)"))->kind == OType::Kind::Sigma);
}

TEST_CASE("omega parser and printer round-trip") {
  for (const char* src :
       {"top", "bot", "7", "(eq 2 2)", "(pair 3 5)", "(fst x)", "(snd x)",
        "(phi succ 4)", "(if0n 0 top bot)", "(lam (x N) (if0n x top bot))",
        "(Y (lam (x S) x))", "(lam (p (* S S)) (pi 1 p))"}) {
    REQUIRE(show_oterm(parse_oterm(src)) == src);
  }
}

TEST_CASE("injective pairing laws on data") {
  REQUIRE(eval_data(parse_oterm("(fst (pair 3 5))")) == 3);
  REQUIRE(eval_data(parse_oterm("(snd (pair 3 5))")) == 5);
  REQUIRE(eval_data(parse_oterm("(pair 0 0)")) == 1);
  REQUIRE(eval_data(parse_oterm("(phi succ 4)")) == 5);
  REQUIRE(eval_data(parse_oterm("(phi pred 0)")) == 0);
  REQUIRE(eval_data(parse_oterm("(eq 2 2)")) == 0);
  REQUIRE(eval_data(parse_oterm("(eq 2 3)")) == 1);
  for (std::uint64_t n = 0; n <= 64; ++n)
    for (std::uint64_t m = 0; m <= 64; m += 13) {
      auto p = o_pair(o_lit(n), o_lit(m));
      REQUIRE(eval_data(o_fst(p)) == n);
      REQUIRE(eval_data(o_snd(p)) == m);
      REQUIRE(eval_data(p) > 0);
    }
}

TEST_CASE("program evaluation basics") {
  REQUIRE(eval_prog(parse_oterm("(if0n 0 top bot)"), 100) == OOutcome::ConvergedTop);
  REQUIRE(eval_prog(parse_oterm("(if0n 3 top bot)"), 100) == OOutcome::DivergedBot);
  REQUIRE(eval_prog(parse_oterm("(Y (lam (x S) x))"), 1000) == OOutcome::FuelExhausted);
  REQUIRE(eval_prog(parse_oterm("((lam (x S) x) top)"), 100) == OOutcome::ConvergedTop);
}

TEST_CASE("the universal retraction terms typecheck at their stated types") {
  UniversalRetraction ur = universal_retraction();
  OTypePtr U = o_universal();
  REQUIRE(otype_equal(otypecheck({}, ur.inj), o_arrow(o_arrow(U, o_sigma()), U)));
  REQUIRE(otype_equal(otypecheck({}, ur.proj), o_arrow(U, o_arrow(U, o_sigma()))));
}

namespace {

struct RoundTripFixture {
  PhiRegistry reg = default_registry();
  std::vector<OTermPtr> probes;
  UniversalRetraction ur = universal_retraction();

  RoundTripFixture() {
    using C = FoTable::Cell;
    auto tbl = [](std::initializer_list<std::pair<std::uint64_t, FoTable::Entry>> es) {
      FoTable t;
      for (auto& [k, v] : es) t.entries[k] = v;
      return t;
    };
    std::vector<FoTable> tables = {
        tbl({}),
        tbl({{0, {C::Top, 0}}}),
        tbl({{0, {C::Value, 3}}}),
        tbl({{0, {C::Value, 1}}, {1, {C::Top, 0}}}),
        tbl({{0, {C::Value, 0}}, {1, {C::Value, 2}}, {2, {C::Top, 0}}}),
        tbl({{2, {C::Value, 5}}}),
        tbl({{0, {C::Bot, 0}}, {1, {C::Value, 0}}}),
        tbl({{0, {C::Value, 2}}, {2, {C::Value, 2}}}),
        tbl({{1, {C::Value, 1}}}),
        tbl({{0, {C::Top, 0}}, {1, {C::Top, 0}}}),
        tbl({{0, {C::Value, 4}}, {4, {C::Top, 0}}}),
    };
    for (std::size_t i = 0; i < tables.size(); ++i)
      probes.push_back(encode_fo(tables[i], "probe" + std::to_string(i), reg));
  }

  OOutcome run(const OTermPtr& t) { return eval_prog(t, kFuel, reg); }
};

}  // namespace

TEST_CASE("encode_fo produces the intended behaviors") {
  RoundTripFixture fx;
  REQUIRE(fx.run(o_app(o_app(fx.probes[0], o_lit(0)), parse_oterm("(lam (v N) top)"))) ==
          OOutcome::DivergedBot);
  REQUIRE(fx.run(o_app(o_app(fx.probes[1], o_lit(0)), parse_oterm("(lam (v N) bot)"))) ==
          OOutcome::ConvergedTop);
  REQUIRE(fx.run(o_app(o_app(fx.probes[2], o_lit(0)),
                       parse_oterm("(lam (v N) (if0n (eq v 3) top bot))"))) ==
          OOutcome::ConvergedTop);
  REQUIRE(fx.run(o_app(o_app(fx.probes[2], o_lit(0)),
                       parse_oterm("(lam (v N) (if0n (eq v 2) top bot))"))) ==
          OOutcome::DivergedBot);
  REQUIRE(fx.run(o_app(o_app(fx.probes[2], o_lit(7)), parse_oterm("(lam (v N) top)"))) ==
          OOutcome::DivergedBot);
}

TEST_CASE("universal retraction round-trips on finite-support functions") {
  RoundTripFixture fx;
  OTypePtr U = o_universal();
  std::vector<OTermPtr> subjects = {
      o_lam("h", U, o_bot()),
      o_lam("h", U, o_top()),
      parse_oterm("(lam (h (-> N (-> (-> N S) S))) ((h 0) (lam (v N) (if0n v top bot))))"),
      parse_oterm(
          "(lam (h (-> N (-> (-> N S) S))) ((h 1) (lam (v N) (if0n (eq v 2) top bot))))"),
      parse_oterm("(lam (h (-> N (-> (-> N S) S))) ((h 0) (lam (v N) (if0n v ((h 1) (lam (w "
                  "N) (if0n w bot top))) bot))))"),
      parse_oterm("(lam (h (-> N (-> (-> N S) S))) ((h 2) (lam (v N) (if0n (eq v 5) top "
                  "(if0n v bot top)))))"),
  };
  REQUIRE(subjects.size() >= 5);
  REQUIRE(fx.probes.size() >= 10);
  for (std::size_t si = 0; si < subjects.size(); ++si) {
    OTermPtr rounded = o_app(fx.ur.proj, o_app(fx.ur.inj, subjects[si]));
    for (std::size_t pi = 0; pi < fx.probes.size(); ++pi) {
      INFO("subject " << si << " probe " << pi);
      OOutcome want = fx.run(o_app(subjects[si], fx.probes[pi]));
      OOutcome got = fx.run(o_app(rounded, fx.probes[pi]));
      REQUIRE(show_ooutcome(got) == show_ooutcome(want));
    }
  }
}

TEST_CASE("every pointed type embeds into the universal type") {
  RoundTripFixture fx;
  SECTION("sigma") {
    OEmbedding e = embed_type(o_sigma());
    REQUIRE(otype_equal(otypecheck({}, e.inj), o_arrow(o_sigma(), o_universal())));
    for (const char* v : {"top", "bot"}) {
      OOutcome want = fx.run(parse_oterm(v));
      REQUIRE(fx.run(o_app(e.proj, o_app(e.inj, parse_oterm(v)))) == want);
    }
  }
  SECTION("nat to sigma strategies") {
    OTypePtr t = o_arrow(o_nat(), o_sigma());
    OEmbedding e = embed_type(t);
    std::vector<OTermPtr> ks = {
        parse_oterm("(lam (n N) top)"),
        parse_oterm("(lam (n N) (if0n n top bot))"),
        parse_oterm("(lam (n N) (if0n (eq n 2) bot top))"),
    };
    for (const auto& k : ks) {
      OTermPtr rounded = o_app(e.proj, o_app(e.inj, k));
      for (std::uint64_t j = 0; j <= 4; ++j) {
        OOutcome want = fx.run(o_app(k, o_lit(j)));
        REQUIRE(fx.run(o_app(rounded, o_lit(j))) == want);
      }
    }
  }
  SECTION("products") {
    OTypePtr t = o_prod({o_sigma(), o_sigma()});
    OEmbedding e = embed_type(t);
    OTermPtr v = parse_oterm("(tuple top bot)");
    OTermPtr rounded = o_app(e.proj, o_app(e.inj, v));
    REQUIRE(fx.run(o_proj(1, rounded)) == OOutcome::ConvergedTop);
    REQUIRE(fx.run(o_proj(2, rounded)) == OOutcome::DivergedBot);
  }
  SECTION("the cps image of nat embeds through the full chain") {
    OTypePtr t = o_arrow(o_arrow(o_nat(), o_sigma()), o_sigma());
    OEmbedding e = embed_type(t);
    std::vector<std::pair<OTermPtr, OTermPtr>> cases = {
        {parse_oterm("(lam (k (-> N S)) (k 3))"),
         parse_oterm("(lam (n N) (if0n (eq n 3) top bot))")},
        {parse_oterm("(lam (k (-> N S)) top)"), parse_oterm("(lam (n N) bot)")},
        {parse_oterm("(lam (k (-> N S)) bot)"), parse_oterm("(lam (n N) top)")},
    };
    for (auto& [subject, cont] : cases) {
      OOutcome want = fx.run(o_app(subject, cont));
      OTermPtr rounded = o_app(e.proj, o_app(e.inj, subject));
      REQUIRE(fx.run(o_app(rounded, cont)) == want);
    }
  }
  SECTION("the universal type embeds by the identity") {
    OEmbedding e = embed_type(o_universal());
    REQUIRE(show_oterm(e.inj) == "(lam (u (-> N (-> (-> N S) S))) u)");
  }
}

TEST_CASE("cps translations of the nat constants match the macros") {
  REQUIRE(show_oterm(cps_closed(parse_term("0"))) == "(lam (x (-> N S)) (x 0))");
  OTermPtr c2 = cps_closed(parse_term("(lam (f (-> (* S S) S)) (catch 2 f))"));
  REQUIRE(show_oterm(c2).find("(tuple (x 0) (x 1))") != std::string::npos);
}

TEST_CASE("cps preserves types and programs stay at type S") {
  for (const auto& entry : spcf_corpus()) {
    INFO(entry.name);
    Typed typed = elaborate({}, entry.program);
    OTermPtr image = cps(typed.term);
    REQUIRE(otype_equal(otypecheck({}, image), cps_type(typed.type)));
  }
}

TEST_CASE("direct and cps evaluation agree on a sample") {
  for (const char* src : {"top", "((if0 (pred (succ 0))) (tuple top bot))",
                          "((if0 (catch 2 (lam (p (* S S)) (pi 2 p)))) (tuple top bot))"}) {
    EvalResult direct = eval(parse_term(src), 100000);
    OOutcome image = eval_prog(cps_closed(parse_term(src)), kFuel);
    REQUIRE(show_ooutcome(image) == show_outcome(direct.outcome));
  }
}
