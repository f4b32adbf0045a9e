// Acceptance suite: one test case per acceptance criterion, each printing a
// single pass/fail line. The criteria run at their committed bounds:
// exact equalities throughout, cutoff 8 and fuel 1e5 for the program
// corpus, seed 12345 for the randomized law checks.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "bistable/verify.hpp"

using namespace bistable;

namespace {

void report(int number, const char* title, const SuiteReport& r) {
  std::printf("[%s] criterion %2d: %s\n", r.passed() ? "PASS" : "FAIL", number, title);
  if (!r.passed())
    for (const auto& l : r.lines)
      if (!l.pass)
        std::printf("       failed: %s %s\n", l.label.c_str(), l.detail.c_str());
  REQUIRE(r.passed());
}

}  // namespace

TEST_CASE("criterion 1: biorder axioms over the construction grammar") {
  report(1, "biorder axioms + presentation round-trip", verify_biorder_axioms());
}

TEST_CASE("criterion 2: hom-set counts against brute force") {
  report(2, "hom counts 3/4/5 vs independent oracle", verify_hom_counts());
}

TEST_CASE("criterion 3: strong sequentiality") {
  report(3, "bistrict first-order functions are projections (n=2..4)", verify_seq_lemma(4));
}

TEST_CASE("criterion 4: ccc laws on 200 seeded random triples") {
  report(4, "associativity/identity/curry laws", verify_ccc_laws(kDefaultSeed, 200));
}

TEST_CASE("criterion 5: universality at the regression types") {
  report(5, "define_element covers every carrier element", verify_universality());
}

TEST_CASE("criterion 6: retraction laws and the defining axioms") {
  report(6, "inj;proj = id and the axiom instances n<=3", verify_retractions());
}

TEST_CASE("criterion 7: operational/denotational agreement") {
  report(7, "corpus adequacy at cutoff 8, fuel 1e5", verify_adequacy(8, 100000));
}

TEST_CASE("criterion 8: catch/case retraction") {
  report(8, "case_n after catch_n is the identity (n<=3)", verify_catch_case());
}

TEST_CASE("criterion 9: cps differential test") {
  report(9, "direct vs cps outcomes on the corpus", verify_cps_diff());
}

TEST_CASE("criterion 10: universal-type round-trip") {
  report(10, "proj(inj(f)) preserves behavior on probes", verify_omega_roundtrip());
}

TEST_CASE("criterion 11: games structure") {
  report(11, "strategy biorders validate; small cases match", verify_games_structure());
}

TEST_CASE("criterion 12: realization") {
  report(12, "realized strategies are monotone and bistable", verify_realization());
}

TEST_CASE("criterion 13: full embedding") {
  report(13, "sequentialize inverts realized on {o, o -o o}", verify_full_embedding());
}

TEST_CASE("criterion 14: stability") {
  report(14, "bistable functions are inclusion-stable", verify_stability());
}
