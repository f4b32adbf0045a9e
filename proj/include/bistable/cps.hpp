#pragma once

// CPS translation of SPCF into the omega calculus: nat becomes
// (N => S) => S, everything else is structural, and the nat constants
// become the standard macros:
//   0        = \x. x 0
//   succ     = \f. \x. f (\n. x (phi succ n))
//   pred     = \f. \x. f (\n. x (phi pred n))     (pred with floor at 0)
//   IF0      = \f. \p. f (\n. if0n n (pi 1 p) (pi 2 p))   at branch type S,
//              eta-expanded through the continuation at branch type nat
//   catch_n  = \f. \x. f <x 0, ..., x (n-1)>

#include "bistable/omega.hpp"
#include "bistable/term.hpp"

namespace bistable {

inline OTypePtr cps_type(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma:
      return o_sigma();
    case Type::Kind::Nat:
      return o_arrow(o_arrow(o_nat(), o_sigma()), o_sigma());
    case Type::Kind::Prod: {
      std::vector<OTypePtr> items;
      for (const auto& i : t->items) items.push_back(cps_type(i));
      return o_prod(std::move(items));
    }
    case Type::Kind::Arrow:
      return o_arrow(cps_type(t->from), cps_type(t->to));
  }
  fail("internal", "cps_type");
}

namespace cpsdetail {

inline OTypePtr nat_c() { return o_arrow(o_arrow(o_nat(), o_sigma()), o_sigma()); }
inline OTypePtr ns() { return o_arrow(o_nat(), o_sigma()); }

inline OTermPtr unary_macro(const char* phi_name) {
  // \f. \x. f (\n. x (phi name n))
  return o_lam("f", nat_c(),
               o_lam("x", ns(),
                     o_app(o_var("f"),
                           o_lam("n", o_nat(),
                                 o_app(o_var("x"), o_phi(phi_name, o_var("n")))))));
}

inline OTermPtr if0_macro(const TypePtr& branch) {
  OTypePtr bc = cps_type(branch);
  OTypePtr pair_t = o_prod({bc, bc});
  if (branch->kind == Type::Kind::Sigma) {
    // \f. \p. f (\n. if0n n (pi 1 p) (pi 2 p))
    return o_lam(
        "f", nat_c(),
        o_lam("p", pair_t,
              o_app(o_var("f"),
                    o_lam("n", o_nat(),
                          o_if0(o_var("n"), o_proj(1, o_var("p")), o_proj(2, o_var("p")))))));
  }
  // branch type nat: push the conditional through the continuation
  return o_lam(
      "f", nat_c(),
      o_lam("p", pair_t,
            o_lam("k", ns(),
                  o_app(o_var("f"),
                        o_lam("n", o_nat(),
                              o_if0(o_var("n"), o_app(o_proj(1, o_var("p")), o_var("k")),
                                    o_app(o_proj(2, o_var("p")), o_var("k"))))))));
}

inline OTermPtr catch_macro(std::size_t n) {
  // \f. \x. f <x 0, ..., x (n-1)>
  OTypePtr dom = cps_type(t_arrow(t_sigma_pow(n), t_sigma()));
  std::vector<OTermPtr> conts;
  for (std::size_t j = 0; j < n; ++j) conts.push_back(o_app(o_var("x"), o_lit(j)));
  return o_lam("f", dom,
               o_lam("x", ns(), o_app(o_var("f"), o_tuple(std::move(conts)))));
}

}  // namespace cpsdetail

/// Translates an elaborated SPCF term (if0 nodes carry their branch type).
inline OTermPtr cps(const TermPtr& t) {
  using namespace cpsdetail;
  switch (t->kind) {
    case Term::Kind::Var:
      return o_var(t->name);
    case Term::Kind::Lam:
      return o_lam(t->name, cps_type(t->ann), cps(t->kids[0]));
    case Term::Kind::App: {
      if (t->kids[0]->kind == Term::Kind::If0) {
        const TermPtr& scrut = t->kids[0]->kids[0];
        return o_app(o_app(if0_macro(t->kids[0]->ann), cps(scrut)), cps(t->kids[1]));
      }
      return o_app(cps(t->kids[0]), cps(t->kids[1]));
    }
    case Term::Kind::Tuple: {
      std::vector<OTermPtr> items;
      for (const auto& k : t->kids) items.push_back(cps(k));
      return o_tuple(std::move(items));
    }
    case Term::Kind::Proj:
      return o_proj(t->idx, cps(t->kids[0]));
    case Term::Kind::PiConst:
      return o_lam("p", cps_type(t->ann), o_proj(t->idx, o_var("p")));
    case Term::Kind::Top:
      return o_top();
    case Term::Kind::Bot:
      return o_bot();
    case Term::Kind::Zero:
      return o_lam("x", ns(), o_app(o_var("x"), o_lit(0)));
    case Term::Kind::Succ:
      return o_app(unary_macro("succ"), cps(t->kids[0]));
    case Term::Kind::Pred:
      return o_app(unary_macro("pred"), cps(t->kids[0]));
    case Term::Kind::If0:
      fail("type-error", "cps: if0 must be applied (elaborate first)");
    case Term::Kind::Y:
      return o_y(cps(t->kids[0]));
    case Term::Kind::Catch:
      return o_app(catch_macro(t->idx), cps(t->kids[0]));
  }
  fail("internal", "cps");
}

/// Convenience: typecheck + elaborate + translate a closed term.
inline OTermPtr cps_closed(const TermPtr& t) { return cps(elaborate({}, t).term); }

}  // namespace bistable
