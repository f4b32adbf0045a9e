#pragma once

// SPCF operational semantics: unique evaluation-context decomposition,
// the small-step rules, fuel-bounded evaluation with trace output, the
// cutoff denotational semantics (via denote.hpp), catch/case retractions,
// the derived call/cc macro, and the adequacy harness.
//
// Programs are closed terms of type S (Sigma). Evaluation contexts never
// cross binders, so every substituted argument is closed and substitution
// cannot capture. Stuck forms (pred 0, bot in context) are classified as
// divergence.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bistable/denote.hpp"
#include "bistable/lambda.hpp"
#include "bistable/term.hpp"

namespace bistable {

// ---------------------------------------------------------------------------
// Substitution (arguments are closed; shadowing still respected)
// ---------------------------------------------------------------------------

inline TermPtr subst(const TermPtr& body, const std::string& name, const TermPtr& value) {
  switch (body->kind) {
    case Term::Kind::Var:
      return body->name == name ? value : body;
    case Term::Kind::Lam:
      if (body->name == name) return body;  // shadowed
      return lam(body->name, body->ann, subst(body->kids[0], name, value));
    default: {
      bool changed = false;
      std::vector<TermPtr> kids;
      kids.reserve(body->kids.size());
      for (const auto& k : body->kids) {
        TermPtr k2 = subst(k, name, value);
        changed = changed || (k2 != k);
        kids.push_back(std::move(k2));
      }
      if (!changed) return body;
      Term t = *body;
      t.kids = std::move(kids);
      return mk(std::move(t));
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation contexts and decomposition
// ---------------------------------------------------------------------------

struct Frame {
  enum class K { AppFun, PiArg, If0Scrut, ProjBody, SuccBody, PredBody };
  K k;
  TermPtr arg;      // AppFun: the application argument
  TermPtr pi;       // PiArg: the projection constant
  TypePtr ann;      // If0Scrut: the elaborated branch type
  std::size_t idx;  // ProjBody: projection index
};

using EvalContext = std::vector<Frame>;  // outermost first

/// E[t]: rebuild the program with t in the hole.
inline TermPtr plug(const EvalContext& ctx, TermPtr t) {
  for (std::size_t i = ctx.size(); i-- > 0;) {
    const Frame& f = ctx[i];
    switch (f.k) {
      case Frame::K::AppFun: t = app(t, f.arg); break;
      case Frame::K::PiArg: t = app(f.pi, t); break;
      case Frame::K::If0Scrut: t = if0(t, f.ann); break;
      case Frame::K::ProjBody: t = proj(f.idx, t); break;
      case Frame::K::SuccBody: t = succ(t); break;
      case Frame::K::PredBody: t = pred(t); break;
    }
  }
  return t;
}

struct Decomposition {
  enum class Kind { Redex, TerminalTop, TerminalBot, Stuck };
  Kind kind = Kind::Stuck;
  EvalContext context;
  TermPtr redex;        // the subterm in the hole (Redex/Stuck)
  std::string detail;   // stuck reason
};

/// Unique decomposition of an elaborated closed program.
inline Decomposition decompose(const TermPtr& program) {
  EvalContext ctx;
  TermPtr cur = program;
  while (true) {
    switch (cur->kind) {
      case Term::Kind::Top:
        if (ctx.empty()) return {Decomposition::Kind::TerminalTop, {}, cur, ""};
        return {Decomposition::Kind::Redex, ctx, cur, ""};
      case Term::Kind::Bot:
        if (ctx.empty()) return {Decomposition::Kind::TerminalBot, {}, cur, ""};
        return {Decomposition::Kind::Stuck, ctx, cur, "bot in evaluation context"};
      case Term::Kind::App: {
        const TermPtr& f = cur->kids[0];
        const TermPtr& a = cur->kids[1];
        if (f->kind == Term::Kind::Lam)
          return {Decomposition::Kind::Redex, ctx, cur, ""};
        if (f->kind == Term::Kind::PiConst) {
          if (a->kind == Term::Kind::Tuple)
            return {Decomposition::Kind::Redex, ctx, cur, ""};
          ctx.push_back({Frame::K::PiArg, nullptr, f, nullptr, 0});
          cur = a;
          break;
        }
        ctx.push_back({Frame::K::AppFun, a, nullptr, nullptr, 0});
        cur = f;
        break;
      }
      case Term::Kind::If0: {
        std::size_t n = 0;
        if (as_numeral(cur->kids[0], n))
          return {Decomposition::Kind::Redex, ctx, cur, ""};
        ctx.push_back({Frame::K::If0Scrut, nullptr, nullptr, cur->ann, 0});
        cur = cur->kids[0];
        break;
      }
      case Term::Kind::Proj: {
        if (cur->kids[0]->kind == Term::Kind::Tuple)
          return {Decomposition::Kind::Redex, ctx, cur, ""};
        ctx.push_back({Frame::K::ProjBody, nullptr, nullptr, nullptr, cur->idx});
        cur = cur->kids[0];
        break;
      }
      case Term::Kind::Pred: {
        std::size_t n = 0;
        if (as_numeral(cur->kids[0], n)) {
          if (n >= 1) return {Decomposition::Kind::Redex, ctx, cur, ""};
          return {Decomposition::Kind::Stuck, ctx, cur, "pred 0 has no rule"};
        }
        ctx.push_back({Frame::K::PredBody, nullptr, nullptr, nullptr, 0});
        cur = cur->kids[0];
        break;
      }
      case Term::Kind::Succ: {
        std::size_t n = 0;
        if (as_numeral(cur, n))
          return {Decomposition::Kind::Stuck, ctx, cur, "numeral in hole position"};
        ctx.push_back({Frame::K::SuccBody, nullptr, nullptr, nullptr, 0});
        cur = cur->kids[0];
        break;
      }
      case Term::Kind::Catch:
      case Term::Kind::Y:
        return {Decomposition::Kind::Redex, ctx, cur, ""};
      default:
        return {Decomposition::Kind::Stuck, ctx, cur,
                "no rule for " + show_term(cur) + " in hole position"};
    }
  }
}

// ---------------------------------------------------------------------------
// Small-step rules
// ---------------------------------------------------------------------------

struct StepResult {
  enum class Kind { Stepped, TerminalTop, TerminalBot, Stuck };
  Kind kind;
  TermPtr term;             // Stepped: the new program
  std::string rule;         // Stepped: rule name
  std::string detail;       // Stuck reason
  std::size_t observed = 0; // largest numeral read or written by this rule
};

inline StepResult step(const TermPtr& program) {
  Decomposition d = decompose(program);
  switch (d.kind) {
    case Decomposition::Kind::TerminalTop:
      return {StepResult::Kind::TerminalTop, nullptr, "", "", 0};
    case Decomposition::Kind::TerminalBot:
      return {StepResult::Kind::TerminalBot, nullptr, "", "", 0};
    case Decomposition::Kind::Stuck:
      return {StepResult::Kind::Stuck, nullptr, "", d.detail, 0};
    case Decomposition::Kind::Redex:
      break;
  }
  const TermPtr& r = d.redex;
  switch (r->kind) {
    case Term::Kind::Top:
      return {StepResult::Kind::Stepped, top(), "top", "", 0};
    case Term::Kind::App: {
      const TermPtr& f = r->kids[0];
      const TermPtr& a = r->kids[1];
      if (f->kind == Term::Kind::Lam)
        return {StepResult::Kind::Stepped, plug(d.context, subst(f->kids[0], f->name, a)),
                "beta", "", 0};
      // projection constant applied to a tuple
      std::size_t i = f->idx;
      if (i == 0 || i > a->kids.size())
        return {StepResult::Kind::Stuck, nullptr, "", "projection index out of range", 0};
      return {StepResult::Kind::Stepped, plug(d.context, a->kids[i - 1]), "proj", "", 0};
    }
    case Term::Kind::Proj: {
      const TermPtr& t = r->kids[0];
      if (r->idx == 0 || r->idx > t->kids.size())
        return {StepResult::Kind::Stuck, nullptr, "", "projection index out of range", 0};
      return {StepResult::Kind::Stepped, plug(d.context, t->kids[r->idx - 1]), "proj", "", 0};
    }
    case Term::Kind::Pred: {
      std::size_t n = 0;
      as_numeral(r->kids[0], n);
      return {StepResult::Kind::Stepped, plug(d.context, numeral(n - 1)), "pred", "", n};
    }
    case Term::Kind::If0: {
      std::size_t n = 0;
      as_numeral(r->kids[0], n);
      TypePtr pair_t = t_prod({r->ann, r->ann});
      TermPtr pc = pi_const(n == 0 ? 1 : 2, pair_t);
      return {StepResult::Kind::Stepped, plug(d.context, pc), n == 0 ? "if0-0" : "if0-succ",
              "", n};
    }
    case Term::Kind::Catch: {
      std::vector<TermPtr> conts;
      for (std::size_t j = 0; j < r->idx; ++j) conts.push_back(plug(d.context, numeral(j)));
      return {StepResult::Kind::Stepped, app(r->kids[0], tuple(conts)), "catch", "",
              r->idx == 0 ? 0 : r->idx - 1};
    }
    case Term::Kind::Y: {
      TermPtr m = r->kids[0];
      return {StepResult::Kind::Stepped, plug(d.context, app(m, r)), "Y", "", 0};
    }
    default:
      return {StepResult::Kind::Stuck, nullptr, "", "unhandled redex", 0};
  }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

enum class EvalOutcome { ConvergedTop, DivergedBot, FuelExhausted };

inline std::string show_outcome(EvalOutcome o) {
  switch (o) {
    case EvalOutcome::ConvergedTop: return "ConvergedTop";
    case EvalOutcome::DivergedBot: return "DivergedBot";
    case EvalOutcome::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

struct TraceLine {
  std::string rule;
  std::string term;
};

struct EvalResult {
  EvalOutcome outcome;
  std::size_t steps = 0;
  std::size_t max_numeral = 0;  // largest numeral read or written by any rule
  std::vector<TraceLine> trace;
};

inline std::size_t max_literal_numeral(const TermPtr& t) {
  std::size_t best = 0, n = 0;
  if (as_numeral(t, n)) return n;
  for (const auto& k : t->kids) best = std::max(best, max_literal_numeral(k));
  return best;
}

/// Iterates the small-step rules. `program` is typechecked and elaborated
/// here; pass fuel as the maximum number of rule applications.
inline EvalResult eval(const TermPtr& program, std::size_t fuel, bool want_trace = false) {
  Typed typed = elaborate({}, program);
  if (typed.type->kind != Type::Kind::Sigma)
    fail("ill-formed-program", "programs have type S, got " + show_type(typed.type));
  TermPtr cur = typed.term;
  EvalResult r;
  r.max_numeral = max_literal_numeral(cur);
  for (std::size_t i = 0;; ++i) {
    StepResult s = step(cur);
    switch (s.kind) {
      case StepResult::Kind::TerminalTop:
        r.outcome = EvalOutcome::ConvergedTop;
        r.steps = i;
        return r;
      case StepResult::Kind::TerminalBot:
        r.outcome = EvalOutcome::DivergedBot;
        r.steps = i;
        return r;
      case StepResult::Kind::Stuck:
        r.outcome = EvalOutcome::DivergedBot;  // stuck forms are divergence
        r.steps = i;
        return r;
      case StepResult::Kind::Stepped:
        if (i == fuel) {
          r.outcome = EvalOutcome::FuelExhausted;
          r.steps = fuel;
          return r;
        }
        cur = s.term;
        r.max_numeral = std::max(r.max_numeral, s.observed);
        if (want_trace) r.trace.push_back({s.rule, show_term(cur)});
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// Cutoff denotational semantics
// ---------------------------------------------------------------------------

/// Denotes a closed term in the cutoff-k model. The DenoteCtx's cutoff is
/// the k; overflowing numerals silently denote bot by design.
inline DenotedValue denote_cutoff(const DenoteCtx& ctx, const TermPtr& m) {
  return denote_element(ctx, m);
}

// ---------------------------------------------------------------------------
// catch / case retractions
// ---------------------------------------------------------------------------

/// case_n : nat => Sigma^n => Sigma sending i < n to the i+1-th projection
/// and i >= n (or bot/top) strictly. Built as a nested IF0 chain on
/// pred-iterates of the scrutinee.
inline TermPtr case_term(std::size_t n) {
  if (n < 1) fail("bad-arity", "case needs n >= 1");
  TermPtr body = bot();
  for (std::size_t i = n; i-- > 0;) {
    TermPtr scrut = var("x");
    for (std::size_t j = 0; j < i; ++j) scrut = pred(scrut);
    body = app(if0(scrut), tuple({proj(i + 1, var("y")), body}));
  }
  return lam("x", t_nat(), lam("y", t_sigma_pow(n), body));
}

struct SnbRetraction {
  TypePtr type;    // the SPCF type T
  TypePtr approx;  // the Sigma-calculus approximant T_i
  TermPtr inj;     // approx => T
  TermPtr proj;    // T => approx
};

/// The approximating retraction at level i: Sigma_i = Sigma,
/// nat_i = Sigma^i => Sigma (inj = catch_i, proj = case_i), congruent
/// closure over products and arrows.
inline SnbRetraction snb_retraction(const TypePtr& t, std::size_t i) {
  switch (t->kind) {
    case Type::Kind::Sigma:
      return {t, t, lam("x", t_sigma(), var("x")), lam("x", t_sigma(), var("x"))};
    case Type::Kind::Nat: {
      if (i < 1) fail("bad-arity", "nat approximant needs i >= 1");
      TypePtr approx = fo_type(i, 1);
      TermPtr inj = lam("f", approx, catch_n(i, var("f")));
      return {t, approx, inj, case_term(i)};
    }
    case Type::Kind::Prod: {
      std::vector<TypePtr> approxes;
      std::vector<SnbRetraction> rs;
      for (const auto& it : t->items) {
        rs.push_back(snb_retraction(it, i));
        approxes.push_back(rs.back().approx);
      }
      TypePtr approx = t_prod(approxes);
      std::vector<TermPtr> injs, projs;
      for (std::size_t j = 0; j < rs.size(); ++j) {
        injs.push_back(app(rs[j].inj, proj(j + 1, var("p"))));
        projs.push_back(app(rs[j].proj, proj(j + 1, var("p"))));
      }
      return {t, approx, lam("p", approx, tuple(injs)), lam("p", t, tuple(projs))};
    }
    case Type::Kind::Arrow: {
      SnbRetraction rs = snb_retraction(t->from, i);
      SnbRetraction rt = snb_retraction(t->to, i);
      TypePtr approx = t_arrow(rs.approx, rt.approx);
      TermPtr inj = lam("f", approx,
                        lam("x", t->from, app(rt.inj, app(var("f"), app(rs.proj, var("x"))))));
      TermPtr pr = lam("f", t,
                       lam("x", rs.approx, app(rt.proj, app(var("f"), app(rs.inj, var("x"))))));
      return {t, approx, inj, pr};
    }
  }
  fail("internal", "snb_retraction");
}

// ---------------------------------------------------------------------------
// The derived call/cc operator
// ---------------------------------------------------------------------------

/// C : ((nat => S) => S) => nat, defined from catch_2, IF0, succ, pred and Y.
inline TermPtr callcc_term() {
  TypePtr G = t_arrow(t_arrow(t_nat(), t_sigma()), t_sigma());
  TypePtr T = t_arrow(G, t_nat());
  TermPtr probe =
      lam("x", t_sigma_pow(2),
          app(var("g"), lam("y", t_nat(), app(if0(var("y")), var("x")))));
  TermPtr shifted =
      lam("h", t_arrow(t_nat(), t_sigma()),
          app(var("g"), lam("z", t_nat(), app(var("h"), pred(var("z"))))));
  TermPtr body = app(if0(catch_n(2, probe)),
                     tuple({zero(), succ(app(var("f"), shifted))}));
  return yfix(lam("f", T, lam("g", G, body)));
}

// ---------------------------------------------------------------------------
// Adequacy harness
// ---------------------------------------------------------------------------

enum class Verdict { Agree, Inconclusive, Disagree };

inline std::string show_verdict(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "Agree";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Disagree: return "Disagree";
  }
  return "?";
}

struct AdequacyReport {
  Verdict verdict;
  EvalOutcome outcome;
  bool denotes_top = false;
  std::size_t steps = 0;
  std::string note;
};

/// Compares the operational outcome with the cutoff denotation:
/// Agree iff (eval converged to top) <-> (denotation is top); Inconclusive
/// when fuel ran out or the run observed numerals >= k.
inline AdequacyReport adequacy_check(const TermPtr& program, std::size_t k, std::size_t fuel) {
  AdequacyReport rep{};
  EvalResult er = eval(program, fuel);
  rep.outcome = er.outcome;
  rep.steps = er.steps;
  if (er.outcome == EvalOutcome::FuelExhausted) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "fuel exhausted";
    return rep;
  }
  if (er.max_numeral >= k) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "run used numerals >= cutoff";
    return rep;
  }
  DenoteCtx ctx(k);
  DenotedValue d = denote_cutoff(ctx, program);
  rep.denotes_top = (d.element.index == 1);
  bool conv = (er.outcome == EvalOutcome::ConvergedTop);
  rep.verdict = (conv == rep.denotes_top) ? Verdict::Agree : Verdict::Disagree;
  return rep;
}

}  // namespace bistable
