#pragma once

// The committed SPCF program corpus for the agreement suites: beta and
// tuple shuffling, small arithmetic (numerals stay below 8), bounded
// fixpoint recursion, catch at arities 1 to 3, and programs built from the
// derived call/cc operator. The three nonterminating entries exhaust any
// finite fuel by unbounded unfolding.

#include <string>
#include <vector>

#include "bistable/spcf.hpp"
#include "bistable/term.hpp"

namespace bistable {

struct CorpusEntry {
  std::string name;
  TermPtr program;
  bool terminates;  // whether bounded fuel suffices
};

inline const std::vector<CorpusEntry>& spcf_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> c;
    auto add = [&](const std::string& name, const std::string& src, bool term = true) {
      c.push_back({name, parse_term(src), term});
    };

    // beta and tuples
    add("top", "top");
    add("bot", "bot");
    add("id-top", "((lam (x S) x) top)");
    add("const-top-of-bot", "((lam (x S) top) bot)");
    add("proj-1", "(pi 1 (tuple top bot))");
    add("proj-2", "(pi 2 (tuple top bot))");
    add("pair-arg", "((lam (p (* S S)) (pi 2 p)) (tuple bot top))");
    add("apply-id", "((lam (f (-> S S)) (f top)) (lam (x S) x))");
    add("cbn-discard", "((lam (f (-> S S)) (f bot)) (lam (x S) top))");
    add("apply-proj-fun",
        "((lam (f (-> (* S S) S)) (f (tuple bot top))) (lam (p (* S S)) (pi 2 p)))");
    add("curried", "(((lam (f (-> S (-> S S))) (f top)) (lam (x S) (lam (y S) x))) bot)");
    add("nested-tuple", "(pi 1 (pi 2 (tuple (tuple bot bot) (tuple top bot))))");

    // arithmetic below the cutoff
    add("if0-zero", "((if0 0) (tuple top bot))");
    add("if0-three", "((if0 3) (tuple top bot))");
    add("pred-succ", "((if0 (pred (succ 0))) (tuple top bot))");
    add("pred-three", "((if0 (pred 3)) (tuple bot top))");
    add("pred-chain", "((if0 (pred (pred (pred 3)))) (tuple top bot))");
    add("succ-chain", "((if0 (pred (succ (succ 0)))) (tuple bot top))");
    add("pred-succ-three", "((if0 (pred (succ 3))) (tuple bot top))");
    add("arith-under-lambda",
        "((lam (n nat) ((if0 (pred n)) (tuple top bot))) (succ (succ 0)))");

    // bounded recursion
    add("countdown-top",
        "((Y (lam (f (-> nat S)) (lam (n nat) ((if0 n) (tuple top (f (pred n))))))) 5)");
    add("countdown-bot",
        "((Y (lam (f (-> nat S)) (lam (n nat) ((if0 n) (tuple bot (f (pred n))))))) 3)");
    add("recursive-identity",
        "((if0 ((Y (lam (f (-> nat nat)) (lam (n nat) ((if0 n) (tuple 0 (succ (f (pred "
        "n)))))))) 4)) (tuple bot top))");
    add("omega-sigma", "(Y (lam (x S) x))", /*terminates=*/false);
    add("omega-grow", "((Y (lam (f (-> nat S)) (lam (n nat) (f (succ n))))) 0)",
        /*terminates=*/false);
    add("omega-eta", "((Y (lam (f (-> S S)) (lam (x S) (f x)))) top)", /*terminates=*/false);

    // catch at arities 1..3
    add("catch1-const-top", "((if0 (catch 1 (lam (p (* S)) top))) (tuple top bot))");
    add("catch1-proj", "((if0 (catch 1 (lam (p (* S)) (pi 1 p)))) (tuple top bot))");
    add("catch2-worked-example",
        "((if0 (catch 2 (lam (p (* S S)) (pi 2 p)))) (tuple top bot))");
    add("catch2-first", "((if0 (catch 2 (lam (p (* S S)) (pi 1 p)))) (tuple top bot))");
    add("catch2-const-bot", "((if0 (catch 2 (lam (p (* S S)) bot))) (tuple top bot))");
    add("catch2-under-beta",
        "((if0 (catch 2 (lam (p (* S S)) (pi 1 (tuple (pi 2 p) bot))))) (tuple bot top))");
    add("catch3-second",
        "((if0 (pred (catch 3 (lam (p (* S S S)) (pi 2 p))))) (tuple top bot))");
    add("catch3-third",
        "((if0 (pred (pred (catch 3 (lam (p (* S S S)) (pi 3 p)))))) (tuple top bot))");

    // the derived call/cc operator
    auto add_callcc = [&](const std::string& name, const std::string& gsrc, TermPtr probe_of) {
      c.push_back({name, probe_of, true});
      (void)gsrc;
    };
    TermPtr C = callcc_term();
    add_callcc("callcc-invoke-2", "(lam (k (-> nat S)) (k 2))",
               app(if0(pred(pred(app(C, parse_term("(lam (k (-> nat S)) (k 2))"))))),
                   tuple({top(), bot()})));
    add_callcc("callcc-invoke-0", "(lam (k (-> nat S)) (k 0))",
               app(if0(app(C, parse_term("(lam (k (-> nat S)) (k 0))"))),
                   tuple({top(), bot()})));
    add_callcc("callcc-top", "(lam (k (-> nat S)) top)",
               app(if0(app(C, parse_term("(lam (k (-> nat S)) top)"))),
                   tuple({bot(), bot()})));
    add_callcc("callcc-bot", "(lam (k (-> nat S)) bot)",
               app(if0(app(C, parse_term("(lam (k (-> nat S)) bot)"))),
                   tuple({top(), top()})));
    add_callcc("callcc-guarded-1", "(lam (k (-> nat S)) ((if0 1) (tuple bot (k 1))))",
               app(if0(pred(app(C, parse_term(
                                      "(lam (k (-> nat S)) ((if0 1) (tuple bot (k 1))))")))),
                   tuple({top(), bot()})));
    {
      // a countdown under call/cc: the recursion captures the continuation
      TermPtr loop = yfix(lam(
          "f", t_arrow(t_nat(), t_sigma()),
          lam("n", t_nat(),
              app(if0(var("n")),
                  tuple({app(var("k"), numeral(2)), app(var("f"), pred(var("n")))})))));
      TermPtr g = lam("k", t_arrow(t_nat(), t_sigma()), app(loop, numeral(3)));
      c.push_back({"callcc-countdown",
                   app(if0(pred(pred(app(C, g)))), tuple({top(), bot()})), true});
    }
    return c;
  }();
  return corpus;
}

}  // namespace bistable
