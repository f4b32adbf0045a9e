#pragma once

// Named verification suites. Each suite checks one batch of the library's
// defining properties at desk scale and reports one line per check; the
// acceptance binary and the command-line `verify` subcommand both run
// these.

#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bistable/bifun.hpp"
#include "bistable/biorder.hpp"
#include "bistable/corpus.hpp"
#include "bistable/cps.hpp"
#include "bistable/games.hpp"
#include "bistable/lambda.hpp"
#include "bistable/omega.hpp"
#include "bistable/spcf.hpp"

namespace bistable {

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct CheckLine {
  std::string label;
  bool pass;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckLine> lines;

  bool passed() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
  void check(const std::string& label, bool ok, const std::string& detail = "") {
    lines.push_back({label, ok, detail});
  }
};

// ---------------------------------------------------------------------------
// 1. Biorder axioms over the construction grammar
// ---------------------------------------------------------------------------

namespace verifydetail {

inline std::string biorder_key(const FiniteBiorder& b) {
  std::ostringstream os;
  for (const auto& e : b.elements) os << e << '|';
  os << '/';
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) os << (b.le(i, j) ? '1' : '0');
  os << '/';
  for (const auto& cl : b.classes) {
    for (auto i : cl) os << i << ',';
    os << ';';
  }
  return os.str();
}

/// All biorders reachable from the seeds by up to two rounds of bilift,
/// product, coproduct and exponential, capped at 64-element carriers.
inline std::vector<BiorderPtr> construction_pool() {
  std::vector<BiorderPtr> seeds{sigma(), unit_biorder(), empty_biorder()};
  for (std::size_t k = 2; k <= 8; ++k) seeds.push_back(flat(k));

  std::set<std::string> seen;
  std::vector<BiorderPtr> all;
  auto add = [&](const BiorderPtr& b) -> bool {
    if (b->size() > 64) return false;
    if (!seen.insert(biorder_key(*b)).second) return false;
    all.push_back(b);
    return true;
  };
  for (const auto& s : seeds) add(s);

  auto expand = [&](const std::vector<BiorderPtr>& pool) {
    std::vector<BiorderPtr> fresh;
    for (const auto& a : pool) {
      auto bl = bilift(a);
      if (add(bl)) fresh.push_back(bl);
    }
    for (const auto& a : pool)
      for (const auto& b : pool) {
        if (a->size() * b->size() <= 64) {
          auto p = product(a, b);
          if (add(p)) fresh.push_back(p);
        }
        if (a->size() + b->size() <= 64) {
          auto c = coproduct(a, b);
          if (add(c)) fresh.push_back(c);
        }
        try {
          // only build the exponential biorder when its carrier is small;
          // discrete domains pass every table, so check the count first
          if (hom_set(a, b, 1u << 16).size() <= 64) {
            auto e = exponential(a, b, 1u << 16);
            if (add(e.biorder)) fresh.push_back(e.biorder);
          }
        } catch (const Error&) {
          // beyond the enumeration budget; outside this pool
        }
      }
    return fresh;
  };

  expand(seeds);
  // second round over a bounded set of small results, for nesting depth
  std::vector<BiorderPtr> small;
  for (const auto& b : all) {
    if (b->size() <= 6) small.push_back(b);
    if (small.size() >= 24) break;
  }
  expand(small);
  return all;
}

}  // namespace verifydetail

inline SuiteReport verify_biorder_axioms() {
  SuiteReport r{"biorder-axioms", {}};
  auto pool = verifydetail::construction_pool();
  r.check("pool size >= 100", pool.size() >= 100, std::to_string(pool.size()) + " biorders");
  bool all_valid = true;
  bool all_roundtrip = true;
  std::string first_bad;
  for (const auto& b : pool) {
    auto diags = validate(*b);
    if (!diags.empty()) {
      all_valid = false;
      if (first_bad.empty()) first_bad = diags[0].code;
    }
    // presentation round-trip
    std::vector<std::pair<std::size_t, std::size_t>> le;
    for (std::size_t i = 0; i < b->size(); ++i)
      for (std::size_t j = 0; j < b->size(); ++j)
        if (b->le(i, j)) le.emplace_back(i, j);
    try {
      auto back = from_bistable_order(b->elements, le, to_bistable_order(*b));
      if (*back != *b) all_roundtrip = false;
    } catch (const Error&) {
      all_roundtrip = false;
    }
  }
  r.check("every generated biorder validates", all_valid, first_bad);
  r.check("the two presentations round-trip", all_roundtrip);
  return r;
}

// ---------------------------------------------------------------------------
// 2. Hom-set counts against an independent brute-force oracle
// ---------------------------------------------------------------------------

namespace verifydetail {

/// Counts monotone bistable tables Sigma^n -> Sigma from first principles:
/// domain points are bitmasks ordered by inclusion, with meets and joins
/// the bitwise operations; no library types involved.
inline std::size_t oracle_hom_count(std::size_t n) {
  const std::size_t points = std::size_t(1) << n;
  const std::size_t tables = std::size_t(1) << points;
  std::size_t count = 0;
  for (std::size_t t = 0; t < tables; ++t) {
    auto f = [&](std::size_t x) { return (t >> x) & 1; };
    bool ok = true;
    for (std::size_t x = 0; x < points && ok; ++x)
      for (std::size_t y = 0; y < points && ok; ++y) {
        if ((x & y) == x && f(x) > f(y)) ok = false;           // monotone
        if (f(x & y) != (f(x) & f(y))) ok = false;             // meets
        if (f(x | y) != (f(x) | f(y))) ok = false;             // joins
      }
    if (ok) ++count;
  }
  return count;
}

}  // namespace verifydetail

inline SuiteReport verify_hom_counts() {
  SuiteReport r{"hom-counts", {}};
  const std::size_t expected[] = {0, 3, 4, 5};
  for (std::size_t n = 1; n <= 3; ++n) {
    std::size_t oracle = verifydetail::oracle_hom_count(n);
    std::vector<BiorderPtr> fs(n, sigma());
    std::size_t lib = hom_set(product_many(fs), sigma()).size();
    r.check("hom(Sigma^" + std::to_string(n) + ", Sigma) = " + std::to_string(expected[n]),
            oracle == expected[n] && lib == expected[n],
            "oracle " + std::to_string(oracle) + ", library " + std::to_string(lib));
  }
  return r;
}

// ---------------------------------------------------------------------------
// 3. Strong sequentiality
// ---------------------------------------------------------------------------

inline SuiteReport verify_seq_lemma(std::size_t max_n = 4) {
  SuiteReport r{"seq-lemma", {}};
  for (std::size_t n = 2; n <= max_n; ++n) {
    std::vector<BiorderPtr> fs(n, sigma());
    auto dom = product_many(fs);
    std::size_t bistrict_count = 0;
    bool all_projections = true;
    bool all_unique = true;
    for (const auto& f : hom_set(dom, sigma())) {
      if (!is_bistrict(f)) continue;
      ++bistrict_count;
      auto idx = strictness_indices(f, fs);
      if (idx.size() != 1) all_unique = false;
      bool is_proj = false;
      for (std::size_t i = 1; i <= n; ++i)
        if (f.table == proj(fs, i).table) is_proj = true;
      if (!is_proj) all_projections = false;
    }
    r.check("n=" + std::to_string(n) + ": bistrict members are projections",
            all_projections && bistrict_count == n,
            std::to_string(bistrict_count) + " bistrict");
    r.check("n=" + std::to_string(n) + ": strictness index unique", all_unique);
  }
  return r;
}

// ---------------------------------------------------------------------------
// 4. CCC laws on seeded random data
// ---------------------------------------------------------------------------

inline SuiteReport verify_ccc_laws(std::uint64_t seed = kDefaultSeed, int rounds = 200) {
  SuiteReport r{"ccc-laws", {}};
  std::mt19937_64 rng(seed);
  std::vector<BiorderPtr> pool{sigma(), unit_biorder(), bilift(flat(2)),
                               product(sigma(), sigma()), coproduct(sigma(), sigma()),
                               exponential(sigma(), sigma()).biorder};
  auto pick_b = [&] { return pool[rng() % pool.size()]; };
  auto pick_f = [&](const BiorderPtr& a, const BiorderPtr& b) {
    auto hs = hom_set(a, b);
    return hs[rng() % hs.size()];
  };
  bool assoc = true, ident = true, beta = true, eta = true, natural = true;
  for (int i = 0; i < rounds; ++i) {
    BiorderPtr a = pick_b(), b = pick_b(), c = pick_b(), d = pick_b();
    auto f = pick_f(a, b), g = pick_f(b, c), h = pick_f(c, d);
    if (compose(compose(f, g), h) != compose(f, compose(g, h))) assoc = false;
    if (compose(identity(a), f) != f || compose(f, identity(b)) != f) ident = false;

    // currying over factors small enough that the exponentials enumerate
    std::vector<BiorderPtr> curry_pool{sigma(), unit_biorder(), exponential(sigma(), sigma()).biorder};
    BiorderPtr x = curry_pool[rng() % curry_pool.size()];
    BiorderPtr y = curry_pool[rng() % curry_pool.size()];
    BiorderPtr z = pool[rng() % 4];
    auto f2 = pick_f(product(x, y), z);
    auto [cf, e] = curry(f2, x, y);
    if (uncurry(cf, e, x) != f2) beta = false;
    auto g2 = pick_f(x, e.biorder);
    auto [cg, e2] = curry(uncurry(g2, e, x), x, y);
    if (cg != g2) eta = false;

    // naturality in the first factor: curry(f2 . (a2 x id)) = curry(f2) . a2
    auto a2 = pick_f(pool[rng() % 4], x);
    std::vector<BiorderPtr> fs1{a2.dom, y};
    std::vector<BiorderPtr> fs2{x, y};
    auto prod1 = product_many(fs1);
    BiFunction shifted{prod1, f2.cod, std::vector<std::size_t>(prod1->size())};
    for (std::size_t p = 0; p < prod1->size(); ++p) {
      auto comps = product_split(fs1, p);
      shifted.table[p] = f2(product_index(fs2, {a2(comps[0]), comps[1]}));
    }
    auto [cshift, e3] = curry(shifted, a2.dom, y);
    if (cshift != compose(a2, cf)) natural = false;
  }
  r.check("associativity of composition", assoc);
  r.check("identity laws", ident);
  r.check("uncurry of curry is the identity", beta);
  r.check("curry of uncurry is the identity", eta);
  r.check("naturality of curry", natural);
  return r;
}

// ---------------------------------------------------------------------------
// 5/6. Universality and retraction laws
// ---------------------------------------------------------------------------

namespace verifydetail {

inline const std::vector<std::string>& universality_types() {
  static const std::vector<std::string> ts{
      "S", "(-> S S)", "(-> (* S S) S)", "(-> (-> S S) S)", "(-> (-> (* S S) S) S)",
      "(-> S (-> S S))"};
  return ts;
}

}  // namespace verifydetail

inline SuiteReport verify_universality() {
  SuiteReport r{"universality", {}};
  DenoteCtx ctx;
  for (const auto& ts : verifydetail::universality_types()) {
    TypePtr t = parse_type(ts);
    const auto& d = ctx.den(t);
    bool ok = true;
    for (std::size_t i = 0; i < d.bi->size() && ok; ++i) {
      TermPtr m = define_element(ctx, Element{d.bi, i}, t);
      if (denote_element(ctx, m).element.index != i) ok = false;
    }
    r.check("every element of " + ts + " is definable", ok,
            std::to_string(d.bi->size()) + " elements");
  }
  return r;
}

inline SuiteReport verify_retractions() {
  SuiteReport r{"retractions", {}};
  DenoteCtx ctx;
  for (const auto& ts : verifydetail::universality_types()) {
    TypePtr t = parse_type(ts);
    RetractionPair rp = retraction_terms(t);
    TermPtr round = lam("e", t, app(rp.proj, app(rp.inj, var("e"))));
    bool ok = denote_bifun(ctx, round) == identity(ctx.den(t).bi);
    r.check("inj;proj = id at " + ts, ok,
            "target Sigma^" + std::to_string(rp.n) + " => Sigma^" + std::to_string(rp.m));
  }
  for (std::size_t n = 1; n <= 3; ++n)
    r.check("defining axiom at n=" + std::to_string(n), axiom_check(ctx, n));
  return r;
}

// ---------------------------------------------------------------------------
// 7. Operational/denotational agreement on the corpus
// ---------------------------------------------------------------------------

inline SuiteReport verify_adequacy(std::size_t k = 8, std::size_t fuel = 100000) {
  SuiteReport r{"adequacy", {}};
  const auto& corpus = spcf_corpus();
  r.check("corpus has >= 30 programs", corpus.size() >= 30, std::to_string(corpus.size()));
  std::size_t agree = 0, inconclusive = 0, disagree = 0;
  std::string first_disagree;
  bool inconclusive_by_fuel = true;
  for (const auto& entry : corpus) {
    AdequacyReport rep = adequacy_check(entry.program, k, fuel);
    switch (rep.verdict) {
      case Verdict::Agree: ++agree; break;
      case Verdict::Inconclusive:
        ++inconclusive;
        if (rep.outcome != EvalOutcome::FuelExhausted) inconclusive_by_fuel = false;
        break;
      case Verdict::Disagree:
        ++disagree;
        if (first_disagree.empty()) first_disagree = entry.name;
        break;
    }
  }
  r.check("zero Disagree verdicts", disagree == 0, first_disagree);
  r.check("at least 25 programs Agree", agree >= 25, std::to_string(agree) + " agree");
  r.check("the rest are Inconclusive by fuel", inconclusive_by_fuel,
          std::to_string(inconclusive) + " inconclusive");
  return r;
}

// ---------------------------------------------------------------------------
// 8. catch/case retraction
// ---------------------------------------------------------------------------

inline SuiteReport verify_catch_case() {
  SuiteReport r{"catch-case", {}};
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t k : {n, std::size_t(8)}) {
      DenoteCtx ctx(k);
      TypePtr fo = t_arrow(t_sigma_pow(n), t_sigma());
      TermPtr round = lam("f", fo, app(case_term(n), catch_n(n, var("f"))));
      bool ok = denote_bifun(ctx, round) == identity(ctx.den(fo).bi);
      r.check("case_" + std::to_string(n) + " after catch_" + std::to_string(n) +
                  " = id at k=" + std::to_string(k),
              ok);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// 9. CPS differential testing
// ---------------------------------------------------------------------------

inline SuiteReport verify_cps_diff(std::size_t fuel = 100000) {
  SuiteReport r{"cps-diff", {}};
  const auto& corpus = spcf_corpus();
  r.check("corpus has >= 20 programs", corpus.size() >= 20, std::to_string(corpus.size()));
  bool all_match = true;
  std::string first_bad;
  for (const auto& entry : corpus) {
    EvalResult direct = eval(entry.program, fuel);
    OOutcome image = eval_prog(cps_closed(entry.program), 2 * fuel);
    bool match = show_outcome(direct.outcome) == show_ooutcome(image);
    if (!match && first_bad.empty()) first_bad = entry.name;
    all_match = all_match && match;
  }
  r.check("direct and cps outcomes coincide on the corpus", all_match, first_bad);
  return r;
}

// ---------------------------------------------------------------------------
// 10. Universal-type round-trip in the omega calculus
// ---------------------------------------------------------------------------

inline SuiteReport verify_omega_roundtrip(std::size_t fuel = 400000) {
  SuiteReport r{"omega-roundtrip", {}};
  PhiRegistry reg = default_registry();
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
  std::vector<OTermPtr> probes;
  for (std::size_t i = 0; i < tables.size(); ++i)
    probes.push_back(encode_fo(tables[i], "vprobe" + std::to_string(i), reg));
  OTypePtr U = o_universal();
  std::vector<std::pair<std::string, OTermPtr>> subjects = {
      {"constant bot", o_lam("h", U, o_bot())},
      {"constant top", o_lam("h", U, o_top())},
      {"query 0 for 0",
       parse_oterm("(lam (h (-> N (-> (-> N S) S))) ((h 0) (lam (v N) (if0n v top bot))))")},
      {"query 1 for 2",
       parse_oterm(
           "(lam (h (-> N (-> (-> N S) S))) ((h 1) (lam (v N) (if0n (eq v 2) top bot))))")},
      {"query 0 then 1",
       parse_oterm("(lam (h (-> N (-> (-> N S) S))) ((h 0) (lam (v N) (if0n v ((h 1) (lam (w "
                   "N) (if0n w bot top))) bot))))")},
      {"query 2 three-way",
       parse_oterm("(lam (h (-> N (-> (-> N S) S))) ((h 2) (lam (v N) (if0n (eq v 5) top "
                   "(if0n v bot top)))))")},
  };
  r.check("at least 5 finite-support subjects", subjects.size() >= 5);
  r.check("at least 10 probe arguments", probes.size() >= 10);
  UniversalRetraction ur = universal_retraction();
  for (const auto& [name, f] : subjects) {
    OTermPtr rounded = o_app(ur.proj, o_app(ur.inj, f));
    bool ok = true;
    for (const auto& h : probes) {
      OOutcome want = eval_prog(o_app(f, h), fuel, reg);
      OOutcome got = eval_prog(o_app(rounded, h), fuel, reg);
      if (want != got) ok = false;
    }
    r.check("proj(inj(" + name + ")) observationally equal on all probes", ok);
  }
  return r;
}

// ---------------------------------------------------------------------------
// 11-14. Games
// ---------------------------------------------------------------------------

namespace verifydetail {

struct NamedGame {
  std::string name;
  GamePtr game;
};

inline std::vector<NamedGame> regression_games() {
  auto o = one_move_game();
  auto qa = qa_game();
  std::vector<NamedGame> gs;
  gs.push_back({"empty", empty_game()});
  gs.push_back({"o", o});
  gs.push_back({"qa", qa});
  gs.push_back({"o -o o", affine_arrow(o, o).game});
  gs.push_back({"o -o qa", affine_arrow(o, qa).game});
  gs.push_back({"qa -o o", affine_arrow(qa, o).game});
  gs.push_back({"o => o", arrow(o, o).game()});
  gs.push_back({"o (x) o", tensor(o, o).game});
  gs.push_back({"o (x) qa", tensor(o, qa).game});
  return gs;
}

}  // namespace verifydetail

inline SuiteReport verify_games_structure() {
  SuiteReport r{"games-structure", {}};
  for (const auto& [name, g] : verifydetail::regression_games()) {
    bool game_ok = validate_game(*g).empty();
    StratBiorder sb = strat_biorder(g);
    bool bi_ok = validate(*sb.biorder).empty();
    bool pointed = is_pointed(*sb.biorder);
    r.check("strategy biorder of " + name + " validates and is pointed",
            game_ok && bi_ok && pointed,
            std::to_string(sb.strategies.size()) + " strategies");
  }
  auto o = one_move_game();
  r.check("the one-move game has two strategies", enumerate_strategies(o).size() == 2);
  r.check("strat(o) is the base biorder", is_isomorphic(*strat_biorder(o).biorder, *sigma()));
  auto ab = affine_arrow(o, o);
  r.check("strat(o -o o) is the function space",
          is_isomorphic(*strat_biorder(ab.game).biorder,
                        *exponential(sigma(), sigma()).biorder));
  return r;
}

namespace verifydetail {

struct ArrowCase {
  std::string name;
  ArrowGame ab;
  StratBiorder sa, sb;
};

inline std::vector<ArrowCase> arrow_cases() {
  auto o = one_move_game();
  auto oo = affine_arrow(o, o).game;
  std::vector<ArrowCase> cs;
  std::vector<std::pair<std::string, GamePtr>> base{{"o", o}, {"o -o o", oo}};
  for (const auto& [an, a] : base)
    for (const auto& [bn, b] : base) {
      ArrowGame ab = arrow(a, b);
      cs.push_back({an + " => " + bn, ab, strat_biorder(a), strat_biorder(b)});
    }
  return cs;
}

}  // namespace verifydetail

inline SuiteReport verify_realization() {
  SuiteReport r{"realization", {}};
  for (auto& c : verifydetail::arrow_cases()) {
    bool ok = true;
    auto strategies = enumerate_strategies(c.ab.game());
    std::set<std::vector<std::size_t>> tables;
    for (const auto& s : strategies) {
      BiFunction f = realized(c.ab, s, c.sa, c.sb);
      if (!is_monotone(f) || !is_bistable(f)) ok = false;
      tables.insert(f.table);
    }
    r.check("every strategy on " + c.name + " realizes a bistable function", ok,
            std::to_string(strategies.size()) + " strategies");
    // informational: whether distinct strategies ever realize one function
    r.check("realized is injective on " + c.name + " (informational)", true,
            tables.size() == strategies.size()
                ? "injective"
                : std::to_string(strategies.size()) + " strategies onto " +
                      std::to_string(tables.size()) + " functions");
  }
  return r;
}

inline SuiteReport verify_full_embedding() {
  SuiteReport r{"full-embedding", {}};
  for (auto& c : verifydetail::arrow_cases()) {
    bool ok = true;
    std::size_t count = 0;
    for (const auto& f : hom_set(c.sa.biorder, c.sb.biorder)) {
      BiFunction fb{c.sa.biorder, c.sb.biorder, f.table};
      Strategy s = sequentialize(fb, c.ab, c.sa, c.sb);
      if (!validate_strategy(s).empty()) ok = false;
      if (realized(c.ab, s, c.sa, c.sb) != fb) ok = false;
      ++count;
    }
    r.check("sequentialize realizes every bistable function on " + c.name, ok,
            std::to_string(count) + " functions");
  }
  return r;
}

inline SuiteReport verify_stability() {
  SuiteReport r{"stability", {}};
  for (auto& c : verifydetail::arrow_cases()) {
    bool ok = true;
    for (const auto& f : hom_set(c.sa.biorder, c.sb.biorder)) {
      BiFunction fb{c.sa.biorder, c.sb.biorder, f.table};
      if (!is_stable(fb, c.sa, c.sb)) ok = false;
    }
    r.check("every bistable function on " + c.name + " is stable", ok);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

inline std::vector<SuiteReport> verify_all(std::uint64_t seed = kDefaultSeed) {
  return {verify_biorder_axioms(), verify_hom_counts(),     verify_seq_lemma(),
          verify_ccc_laws(seed),   verify_universality(),   verify_retractions(),
          verify_adequacy(),       verify_catch_case(),     verify_cps_diff(),
          verify_omega_roundtrip(), verify_games_structure(), verify_realization(),
          verify_full_embedding(), verify_stability()};
}

}  // namespace bistable
