#pragma once

// The CPS target calculus: a data type N of numeral values that never
// appears to the right of an arrow, a program type Sigma, products of
// pointed types, fixpoints at pointed types, and arithmetic primitives
// (zero, equality, injective pairing with projections, and a unary phi_f
// for host-registered total functions).
//
// Types  T ::= N | S | (* P ... P) | (-> T P)   with P pointed (non-N).
// Terms extend the lambda grammar with decimal literals, (eq M N),
// (pair M N), (fst M), (snd M), (phi name M), (if0n M P Q).
//
// Evaluation: N-typed subterms are pure data over N-variables and evaluate
// strictly; pointed types reduce weak-head call-by-name. Injective pairing
// is 2^n (2m+1); eq returns 0 for equal. Both conventions are choices the
// primitives' laws leave open.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bistable/sexpr.hpp"

namespace bistable {

/// Numeral values. 128 bits so that the injective pairing 2^n (2m+1) covers
/// the tested range (components up to 64) with room for nesting.
using ONum = unsigned __int128;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct OType;
using OTypePtr = std::shared_ptr<const OType>;

struct OType {
  enum class Kind { N, Sigma, Prod, Arrow };
  Kind kind;
  std::vector<OTypePtr> items;
  OTypePtr from, to;
};

inline OTypePtr o_nat() {
  static const OTypePtr t = std::make_shared<OType>(OType{OType::Kind::N, {}, nullptr, nullptr});
  return t;
}
inline OTypePtr o_sigma() {
  static const OTypePtr t =
      std::make_shared<OType>(OType{OType::Kind::Sigma, {}, nullptr, nullptr});
  return t;
}
inline OTypePtr o_prod(std::vector<OTypePtr> items) {
  return std::make_shared<OType>(OType{OType::Kind::Prod, std::move(items), nullptr, nullptr});
}
inline OTypePtr o_arrow(OTypePtr a, OTypePtr b) {
  return std::make_shared<OType>(OType{OType::Kind::Arrow, {}, std::move(a), std::move(b)});
}

inline bool otype_equal(const OTypePtr& a, const OTypePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case OType::Kind::N:
    case OType::Kind::Sigma:
      return true;
    case OType::Kind::Prod: {
      if (a->items.size() != b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i)
        if (!otype_equal(a->items[i], b->items[i])) return false;
      return true;
    }
    case OType::Kind::Arrow:
      return otype_equal(a->from, b->from) && otype_equal(a->to, b->to);
  }
  return false;
}

inline bool o_pointed(const OTypePtr& t) { return t->kind != OType::Kind::N; }

/// nat may not occur to the right of an arrow; products are of pointed
/// types.
inline bool otype_wellformed(const OTypePtr& t) {
  switch (t->kind) {
    case OType::Kind::N:
    case OType::Kind::Sigma:
      return true;
    case OType::Kind::Prod:
      for (const auto& i : t->items)
        if (!o_pointed(i) || !otype_wellformed(i)) return false;
      return true;
    case OType::Kind::Arrow:
      return otype_wellformed(t->from) && o_pointed(t->to) && otype_wellformed(t->to);
  }
  return false;
}

inline std::string show_otype(const OTypePtr& t) {
  switch (t->kind) {
    case OType::Kind::N: return "N";
    case OType::Kind::Sigma: return "S";
    case OType::Kind::Prod: {
      std::string s = "(*";
      for (const auto& i : t->items) s += " " + show_otype(i);
      return s + ")";
    }
    case OType::Kind::Arrow:
      return "(-> " + show_otype(t->from) + " " + show_otype(t->to) + ")";
  }
  return "?";
}

/// U = N => (N => S) => S, the universal pointed type.
inline OTypePtr o_universal() {
  return o_arrow(o_nat(), o_arrow(o_arrow(o_nat(), o_sigma()), o_sigma()));
}

inline OTypePtr otype_from_sexpr(const Sexpr& e) {
  if (e.is_atom) {
    if (e.atom == "N") return o_nat();
    if (e.atom == "S") return o_sigma();
    fail("parse-error", "unknown type atom '" + e.atom + "'");
  }
  if (e.items.empty()) fail("parse-error", "empty type form");
  const Sexpr& h = e.items[0];
  if (h.is_atom && h.atom == "*") {
    std::vector<OTypePtr> items;
    for (std::size_t i = 1; i < e.items.size(); ++i) items.push_back(otype_from_sexpr(e.items[i]));
    return o_prod(std::move(items));
  }
  if (h.is_atom && h.atom == "->") {
    if (e.items.size() < 3) fail("parse-error", "(-> T U) needs two or more types");
    OTypePtr t = otype_from_sexpr(e.items.back());
    for (std::size_t i = e.items.size() - 1; i-- > 1;)
      t = o_arrow(otype_from_sexpr(e.items[i]), t);
    return t;
  }
  fail("parse-error", "unknown type form");
}

inline OTypePtr parse_otype(const std::string& s) { return otype_from_sexpr(parse_sexpr(s)); }

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct OTerm;
using OTermPtr = std::shared_ptr<const OTerm>;

struct OTerm {
  enum class Kind {
    Var, Lam, App, Tuple, Proj, Top, Bot,
    Lit, Eq, Pair, Fst, Snd, Phi, If0n, Y
  };
  Kind kind;
  std::string name;  // Var, Lam binder, Phi function name
  OTypePtr ann;      // Lam binder type
  std::vector<OTermPtr> kids;
  std::uint64_t num = 0;  // Lit
  std::size_t idx = 0;    // Proj (1-based)
};

inline OTermPtr omk(OTerm t) { return std::make_shared<OTerm>(std::move(t)); }
inline OTermPtr o_var(std::string n) { return omk({OTerm::Kind::Var, std::move(n), nullptr, {}, 0, 0}); }
inline OTermPtr o_lam(std::string x, OTypePtr t, OTermPtr b) {
  return omk({OTerm::Kind::Lam, std::move(x), std::move(t), {std::move(b)}, 0, 0});
}
inline OTermPtr o_app(OTermPtr f, OTermPtr a) {
  return omk({OTerm::Kind::App, "", nullptr, {std::move(f), std::move(a)}, 0, 0});
}
inline OTermPtr o_app(OTermPtr f, OTermPtr a, OTermPtr b) {
  return o_app(o_app(std::move(f), std::move(a)), std::move(b));
}
inline OTermPtr o_tuple(std::vector<OTermPtr> items) {
  return omk({OTerm::Kind::Tuple, "", nullptr, std::move(items), 0, 0});
}
inline OTermPtr o_proj(std::size_t i, OTermPtr t) {
  return omk({OTerm::Kind::Proj, "", nullptr, {std::move(t)}, 0, i});
}
inline OTermPtr o_top() { return omk({OTerm::Kind::Top, "", nullptr, {}, 0, 0}); }
inline OTermPtr o_bot() { return omk({OTerm::Kind::Bot, "", nullptr, {}, 0, 0}); }
inline OTermPtr o_lit(std::uint64_t n) { return omk({OTerm::Kind::Lit, "", nullptr, {}, n, 0}); }
inline OTermPtr o_eq(OTermPtr a, OTermPtr b) {
  return omk({OTerm::Kind::Eq, "", nullptr, {std::move(a), std::move(b)}, 0, 0});
}
inline OTermPtr o_pair(OTermPtr a, OTermPtr b) {
  return omk({OTerm::Kind::Pair, "", nullptr, {std::move(a), std::move(b)}, 0, 0});
}
inline OTermPtr o_fst(OTermPtr t) { return omk({OTerm::Kind::Fst, "", nullptr, {std::move(t)}, 0, 0}); }
inline OTermPtr o_snd(OTermPtr t) { return omk({OTerm::Kind::Snd, "", nullptr, {std::move(t)}, 0, 0}); }
inline OTermPtr o_phi(std::string name, OTermPtr t) {
  return omk({OTerm::Kind::Phi, std::move(name), nullptr, {std::move(t)}, 0, 0});
}
inline OTermPtr o_if0(OTermPtr n, OTermPtr p, OTermPtr q) {
  return omk({OTerm::Kind::If0n, "", nullptr, {std::move(n), std::move(p), std::move(q)}, 0, 0});
}
inline OTermPtr o_y(OTermPtr f) { return omk({OTerm::Kind::Y, "", nullptr, {std::move(f)}, 0, 0}); }

inline std::string show_oterm(const OTermPtr& t) {
  switch (t->kind) {
    case OTerm::Kind::Var: return t->name;
    case OTerm::Kind::Lam:
      return "(lam (" + t->name + " " + show_otype(t->ann) + ") " + show_oterm(t->kids[0]) + ")";
    case OTerm::Kind::App:
      return "(" + show_oterm(t->kids[0]) + " " + show_oterm(t->kids[1]) + ")";
    case OTerm::Kind::Tuple: {
      std::string s = "(tuple";
      for (const auto& k : t->kids) s += " " + show_oterm(k);
      return s + ")";
    }
    case OTerm::Kind::Proj:
      return "(pi " + std::to_string(t->idx) + " " + show_oterm(t->kids[0]) + ")";
    case OTerm::Kind::Top: return "top";
    case OTerm::Kind::Bot: return "bot";
    case OTerm::Kind::Lit: return std::to_string(t->num);
    case OTerm::Kind::Eq:
      return "(eq " + show_oterm(t->kids[0]) + " " + show_oterm(t->kids[1]) + ")";
    case OTerm::Kind::Pair:
      return "(pair " + show_oterm(t->kids[0]) + " " + show_oterm(t->kids[1]) + ")";
    case OTerm::Kind::Fst: return "(fst " + show_oterm(t->kids[0]) + ")";
    case OTerm::Kind::Snd: return "(snd " + show_oterm(t->kids[0]) + ")";
    case OTerm::Kind::Phi:
      return "(phi " + t->name + " " + show_oterm(t->kids[0]) + ")";
    case OTerm::Kind::If0n:
      return "(if0n " + show_oterm(t->kids[0]) + " " + show_oterm(t->kids[1]) + " " +
             show_oterm(t->kids[2]) + ")";
    case OTerm::Kind::Y: return "(Y " + show_oterm(t->kids[0]) + ")";
  }
  return "?";
}

namespace odetail {

inline bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline OTermPtr oterm_from_sexpr(const Sexpr& e) {
  if (e.is_atom) {
    if (e.atom == "top") return o_top();
    if (e.atom == "bot") return o_bot();
    if (all_digits(e.atom)) return o_lit(std::stoull(e.atom));
    return o_var(e.atom);
  }
  if (e.items.empty()) fail("parse-error", "empty term form");
  const Sexpr& h = e.items[0];
  if (h.is_atom) {
    const std::string& s = h.atom;
    auto arity = [&](std::size_t n, const char* what) {
      if (e.items.size() != n + 1) fail("parse-error", std::string(what) + ": wrong arity");
    };
    if (s == "lam") {
      arity(2, "lam");
      const Sexpr& binder = e.items[1];
      if (binder.is_atom || binder.items.size() != 2 || !binder.items[0].is_atom)
        fail("parse-error", "lam binder must be (x T)");
      return o_lam(binder.items[0].atom, otype_from_sexpr(binder.items[1]),
                   oterm_from_sexpr(e.items[2]));
    }
    if (s == "tuple") {
      std::vector<OTermPtr> items;
      for (std::size_t i = 1; i < e.items.size(); ++i)
        items.push_back(oterm_from_sexpr(e.items[i]));
      return o_tuple(std::move(items));
    }
    if (s == "pi") {
      arity(2, "pi");
      if (!e.items[1].is_atom || !all_digits(e.items[1].atom))
        fail("parse-error", "pi index must be a numeral");
      return o_proj(std::stoul(e.items[1].atom), oterm_from_sexpr(e.items[2]));
    }
    if (s == "eq") { arity(2, "eq"); return o_eq(oterm_from_sexpr(e.items[1]), oterm_from_sexpr(e.items[2])); }
    if (s == "pair") { arity(2, "pair"); return o_pair(oterm_from_sexpr(e.items[1]), oterm_from_sexpr(e.items[2])); }
    if (s == "fst") { arity(1, "fst"); return o_fst(oterm_from_sexpr(e.items[1])); }
    if (s == "snd") { arity(1, "snd"); return o_snd(oterm_from_sexpr(e.items[1])); }
    if (s == "phi") {
      arity(2, "phi");
      if (!e.items[1].is_atom) fail("parse-error", "phi needs a function name");
      return o_phi(e.items[1].atom, oterm_from_sexpr(e.items[2]));
    }
    if (s == "if0n") {
      arity(3, "if0n");
      return o_if0(oterm_from_sexpr(e.items[1]), oterm_from_sexpr(e.items[2]),
                   oterm_from_sexpr(e.items[3]));
    }
    if (s == "Y") { arity(1, "Y"); return o_y(oterm_from_sexpr(e.items[1])); }
  }
  if (e.items.size() < 2) fail("parse-error", "application needs an argument");
  OTermPtr t = oterm_from_sexpr(e.items[0]);
  for (std::size_t i = 1; i < e.items.size(); ++i) t = o_app(t, oterm_from_sexpr(e.items[i]));
  return t;
}

}  // namespace odetail

inline OTermPtr parse_oterm(const std::string& s) {
  return odetail::oterm_from_sexpr(parse_sexpr(s));
}

// ---------------------------------------------------------------------------
// Typechecking
// ---------------------------------------------------------------------------

using OTypeEnv = std::map<std::string, OTypePtr>;

inline OTypePtr otypecheck(const OTypeEnv& env, const OTermPtr& t) {
  switch (t->kind) {
    case OTerm::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) fail("type-error", "unbound variable '" + t->name + "'");
      return it->second;
    }
    case OTerm::Kind::Lam: {
      if (!otype_wellformed(t->ann))
        fail("pointedness-violation", "ill-formed binder type " + show_otype(t->ann));
      OTypeEnv e2 = env;
      e2[t->name] = t->ann;
      OTypePtr body = otypecheck(e2, t->kids[0]);
      if (!o_pointed(body))
        fail("pointedness-violation", "nat may not occur on the right of an arrow");
      return o_arrow(t->ann, body);
    }
    case OTerm::Kind::App: {
      OTypePtr f = otypecheck(env, t->kids[0]);
      OTypePtr a = otypecheck(env, t->kids[1]);
      if (f->kind != OType::Kind::Arrow) fail("type-error", "application of a non-function");
      if (!otype_equal(f->from, a))
        fail("type-error", "argument type " + show_otype(a) + " does not match " +
                               show_otype(f->from));
      return f->to;
    }
    case OTerm::Kind::Tuple: {
      std::vector<OTypePtr> items;
      for (const auto& k : t->kids) {
        OTypePtr kt = otypecheck(env, k);
        if (!o_pointed(kt)) fail("pointedness-violation", "product components must be pointed");
        items.push_back(kt);
      }
      return o_prod(std::move(items));
    }
    case OTerm::Kind::Proj: {
      OTypePtr b = otypecheck(env, t->kids[0]);
      if (b->kind != OType::Kind::Prod) fail("type-error", "projection of a non-product");
      if (t->idx == 0 || t->idx > b->items.size())
        fail("type-error", "projection index out of range");
      return b->items[t->idx - 1];
    }
    case OTerm::Kind::Top:
    case OTerm::Kind::Bot:
      return o_sigma();
    case OTerm::Kind::Lit:
      return o_nat();
    case OTerm::Kind::Eq:
    case OTerm::Kind::Pair: {
      for (const auto& k : t->kids)
        if (otypecheck(env, k)->kind != OType::Kind::N)
          fail("type-error", "arithmetic on a non-numeral");
      return o_nat();
    }
    case OTerm::Kind::Fst:
    case OTerm::Kind::Snd:
    case OTerm::Kind::Phi: {
      if (otypecheck(env, t->kids[0])->kind != OType::Kind::N)
        fail("type-error", "arithmetic on a non-numeral");
      return o_nat();
    }
    case OTerm::Kind::If0n: {
      if (otypecheck(env, t->kids[0])->kind != OType::Kind::N)
        fail("type-error", "if0n scrutinee must be a numeral");
      OTypePtr p = otypecheck(env, t->kids[1]);
      OTypePtr q = otypecheck(env, t->kids[2]);
      if (p->kind != OType::Kind::Sigma || q->kind != OType::Kind::Sigma)
        fail("type-error", "if0n branches must have type S");
      return o_sigma();
    }
    case OTerm::Kind::Y: {
      OTypePtr f = otypecheck(env, t->kids[0]);
      if (f->kind != OType::Kind::Arrow || !otype_equal(f->from, f->to) ||
          !o_pointed(f->from))
        fail("type-error", "Y needs an argument of type (-> P P) with P pointed");
      return f->from;
    }
  }
  fail("type-error", "unreachable");
}

// ---------------------------------------------------------------------------
// Registry of total numeral functions
// ---------------------------------------------------------------------------

using PhiFn = std::function<ONum(ONum)>;

struct PhiRegistry {
  std::map<std::string, PhiFn> fns;

  const PhiFn& get(const std::string& name) const {
    auto it = fns.find(name);
    if (it == fns.end()) fail("unknown-phi", "no registered function '" + name + "'");
    return it->second;
  }
};

/// successor and predecessor-with-floor are always available.
inline PhiRegistry default_registry() {
  PhiRegistry r;
  r.fns["succ"] = [](ONum n) { return n + 1; };
  r.fns["pred"] = [](ONum n) -> ONum { return n == 0 ? 0 : n - 1; };
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace odetail {

struct OEnvNode;
using OEnv = std::shared_ptr<OEnvNode>;

struct OThunk {
  OTermPtr term;
  OEnv env;
};

struct OEnvNode {
  std::string name;
  OThunk thunk;
  OEnv next;

  // unlink iteratively: environment chains grow with the step count and
  // recursive shared_ptr destruction would exhaust the stack
  ~OEnvNode() {
    OEnv cur = std::move(next);
    while (cur && cur.use_count() == 1) {
      OEnv tmp = std::move(cur->next);
      cur = std::move(tmp);
    }
  }
};

inline OEnv oextend(const OEnv& env, const std::string& n, OThunk t) {
  auto node = std::make_shared<OEnvNode>();
  node->name = n;
  node->thunk = std::move(t);
  node->next = env;
  return node;
}

inline const OThunk& olookup(const OEnv& env, const std::string& n) {
  for (const OEnvNode* p = env.get(); p; p = p->next.get())
    if (p->name == n) return p->thunk;
  fail("open-term", "unbound variable at evaluation time: " + n);
}

}  // namespace odetail

/// Strict evaluation of a data (N-typed) term. Total by the type
/// discipline: data terms are built from literals, data variables and the
/// arithmetic primitives only.
inline ONum eval_data(const OTermPtr& t, const odetail::OEnv& env,
                      const PhiRegistry& reg) {
  switch (t->kind) {
    case OTerm::Kind::Lit:
      return t->num;
    case OTerm::Kind::Var: {
      const auto& th = odetail::olookup(env, t->name);
      return eval_data(th.term, th.env, reg);
    }
    case OTerm::Kind::Eq:
      return eval_data(t->kids[0], env, reg) == eval_data(t->kids[1], env, reg) ? 0 : 1;
    case OTerm::Kind::Pair: {
      ONum a = eval_data(t->kids[0], env, reg);
      ONum b = eval_data(t->kids[1], env, reg);
      if (a > 100 || b > (ONum(1) << 24))
        fail("data-overflow", "injective pairing out of range");
      return (ONum(1) << unsigned(a)) * (2 * b + 1);
    }
    case OTerm::Kind::Fst: {
      ONum v = eval_data(t->kids[0], env, reg);
      if (v == 0) return 0;
      ONum a = 0;
      while ((v & 1) == 0) { v >>= 1; ++a; }
      return a;
    }
    case OTerm::Kind::Snd: {
      ONum v = eval_data(t->kids[0], env, reg);
      if (v == 0) return 0;
      while ((v & 1) == 0) v >>= 1;
      return (v - 1) / 2;
    }
    case OTerm::Kind::Phi:
      return reg.get(t->name)(eval_data(t->kids[0], env, reg));
    default:
      fail("type-error", "not a data term: " + show_oterm(t));
  }
}

/// Convenience wrapper for closed data terms.
inline ONum eval_data(const OTermPtr& t, const PhiRegistry& reg = default_registry()) {
  return eval_data(t, nullptr, reg);
}

enum class OOutcome { ConvergedTop, DivergedBot, FuelExhausted };

inline std::string show_ooutcome(OOutcome o) {
  switch (o) {
    case OOutcome::ConvergedTop: return "ConvergedTop";
    case OOutcome::DivergedBot: return "DivergedBot";
    case OOutcome::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

namespace odetail {

struct OValue {
  enum class K { Top, Bot, Closure, Tuple };
  K k;
  OTermPtr lam;  // Closure
  OEnv env;
  std::vector<OThunk> items;  // Tuple
};

/// Weak-head evaluation at pointed types. Fuel counts beta steps, fixpoint
/// unfoldings, branch selections and projections.
inline std::optional<OValue> whnf(OTermPtr t, OEnv env, const PhiRegistry& reg,
                                  std::size_t& fuel) {
  while (true) {
    switch (t->kind) {
      case OTerm::Kind::Top:
        return OValue{OValue::K::Top, nullptr, nullptr, {}};
      case OTerm::Kind::Bot:
        return OValue{OValue::K::Bot, nullptr, nullptr, {}};
      case OTerm::Kind::Lam:
        return OValue{OValue::K::Closure, t, env, {}};
      case OTerm::Kind::Tuple: {
        std::vector<OThunk> items;
        for (const auto& k : t->kids) items.push_back(OThunk{k, env});
        return OValue{OValue::K::Tuple, nullptr, nullptr, std::move(items)};
      }
      case OTerm::Kind::Var: {
        const OThunk& th = olookup(env, t->name);
        t = th.term;
        env = th.env;
        break;
      }
      case OTerm::Kind::App: {
        auto f = whnf(t->kids[0], env, reg, fuel);
        if (!f) return std::nullopt;
        if (f->k != OValue::K::Closure) fail("type-error", "application of a non-closure");
        if (fuel == 0) return std::nullopt;
        --fuel;
        OEnv e2 = oextend(f->env, f->lam->name, OThunk{t->kids[1], env});
        t = f->lam->kids[0];
        env = e2;
        break;
      }
      case OTerm::Kind::Proj: {
        auto v = whnf(t->kids[0], env, reg, fuel);
        if (!v) return std::nullopt;
        if (v->k != OValue::K::Tuple) fail("type-error", "projection of a non-tuple");
        if (t->idx == 0 || t->idx > v->items.size())
          fail("type-error", "projection index out of range");
        if (fuel == 0) return std::nullopt;
        --fuel;
        const OThunk& th = v->items[t->idx - 1];
        t = th.term;
        env = th.env;
        break;
      }
      case OTerm::Kind::If0n: {
        ONum n = eval_data(t->kids[0], env, reg);
        if (fuel == 0) return std::nullopt;
        --fuel;
        t = (n == 0) ? t->kids[1] : t->kids[2];
        break;
      }
      case OTerm::Kind::Y: {
        if (fuel == 0) return std::nullopt;
        --fuel;
        t = o_app(t->kids[0], t);
        break;
      }
      default:
        fail("type-error", "data term in program position: " + show_oterm(t));
    }
  }
}

}  // namespace odetail

/// Runs a closed Sigma-typed term to top/bot within the fuel.
inline OOutcome eval_prog(const OTermPtr& t, std::size_t fuel,
                          const PhiRegistry& reg = default_registry()) {
  std::size_t f = fuel;
  auto v = odetail::whnf(t, nullptr, reg, f);
  if (!v) return OOutcome::FuelExhausted;
  switch (v->k) {
    case odetail::OValue::K::Top: return OOutcome::ConvergedTop;
    case odetail::OValue::K::Bot: return OOutcome::DivergedBot;
    default: fail("type-error", "program evaluated to a non-ground value");
  }
}

// ---------------------------------------------------------------------------
// The universal retraction U => S  <|  U
// ---------------------------------------------------------------------------

/// h with position a overwritten by v, at type U. The displayed update is
/// expressed pointwise: test equality of the address, then branch inside
/// the continuation (if0n only branches at S, so the conditional is
/// eta-expanded through the (N => S) argument).
inline OTermPtr o_update(const OTermPtr& h, const OTermPtr& a, const OTermPtr& v) {
  return o_lam("uz", o_nat(),
               o_lam("up", o_arrow(o_nat(), o_sigma()),
                     o_if0(o_eq(o_var("uz"), a), o_app(v, o_var("up")),
                           o_app(o_app(h, o_var("uz")), o_var("up")))));
}

struct UniversalRetraction {
  OTermPtr inj;   // (U => S) => U
  OTermPtr proj;  // U => (U => S)
};

/// The fixpoint-defined coding terms. The encoded value stores at address
/// 0 the root interaction of f (constant, or the index it interrogates)
/// and at address (pair v w) the subtree reached after reading value v,
/// recursively.
///
/// The published display of these two terms has unbalanced brackets and an
/// ambiguous update index; this reconstruction follows the defining
/// equations inj(f)(0) = "ask i", inj(f)(pair v w) = inj(residual of f
/// after reading v at its index)(w), with the round-trip law as the
/// oracle.
inline UniversalRetraction universal_retraction() {
  OTypePtr U = o_universal();
  OTypePtr US = o_arrow(U, o_sigma());
  OTypePtr NS = o_arrow(o_nat(), o_sigma());
  // inj = Y \F. \f. \x. \y.
  //         f (\a. \b. if0n x (y a)
  //                          (F (\k. f (update k a (\p. p (fst x)))) (snd x) y))
  OTermPtr probe_inner =
      o_if0(o_var("x"), o_app(o_var("y"), o_var("a")),
            o_app(o_app(o_app(o_var("F"),
                              o_lam("k", U,
                                    o_app(o_var("f"),
                                          o_update(o_var("k"), o_var("a"),
                                                   o_lam("p", NS,
                                                         o_app(o_var("p"),
                                                               o_fst(o_var("x")))))))),
                        o_snd(o_var("x"))),
                  o_var("y")));
  OTermPtr probe = o_lam("a", o_nat(), o_lam("b", NS, probe_inner));
  OTermPtr inj =
      o_y(o_lam("F", o_arrow(US, U),
                o_lam("f", US,
                      o_lam("x", o_nat(), o_lam("y", NS, o_app(o_var("f"), probe))))));
  // proj = Y \G. \g. \h. g 0 (\u. h u (\v. G (\w. g (pair v w)) h))
  OTermPtr inner_cont =
      o_lam("u", o_nat(),
            o_app(o_app(o_var("h"), o_var("u")),
                  o_lam("v", o_nat(),
                        o_app(o_app(o_var("G"),
                                    o_lam("w", o_nat(),
                                          o_app(o_var("g"), o_pair(o_var("v"), o_var("w"))))),
                              o_var("h")))));
  OTermPtr proj =
      o_y(o_lam("G", o_arrow(U, US),
                o_lam("g", U, o_lam("h", U, o_app(o_app(o_var("g"), o_lit(0)), inner_cont)))));
  return {inj, proj};
}

// ---------------------------------------------------------------------------
// First-order encoding
// ---------------------------------------------------------------------------

/// A finite table for an element of U: each address maps to bot, top, or a
/// numeral value; addresses beyond the map are bot.
struct FoTable {
  enum class Cell { Bot, Top, Value };
  struct Entry {
    Cell cell;
    std::uint64_t value = 0;
  };
  std::map<std::uint64_t, Entry> entries;
};

/// Registers the 0/1/m+2 coding of the table and returns the term
/// \x. \y. if0n code(x) bot (if0n pred(code(x)) top (y (pred (pred (code x))))).
inline OTermPtr encode_fo(const FoTable& table, const std::string& name, PhiRegistry& reg) {
  FoTable copy = table;
  reg.fns[name] = [copy](ONum n) -> ONum {
    if (n > ~std::uint64_t(0)) return 0;
    auto it = copy.entries.find(std::uint64_t(n));
    if (it == copy.entries.end()) return 0;
    switch (it->second.cell) {
      case FoTable::Cell::Bot: return 0;
      case FoTable::Cell::Top: return 1;
      case FoTable::Cell::Value: return it->second.value + 2;
    }
    return 0;
  };
  OTermPtr code = o_phi(name, o_var("x"));
  return o_lam(
      "x", o_nat(),
      o_lam("y", o_arrow(o_nat(), o_sigma()),
            o_if0(code, o_bot(),
                  o_if0(o_phi("pred", code), o_top(),
                        o_app(o_var("y"), o_phi("pred", o_phi("pred", code)))))));
}

// ---------------------------------------------------------------------------
// Embedding every pointed type into U
// ---------------------------------------------------------------------------

struct OEmbedding {
  OTypePtr type;
  OTermPtr inj;   // T => U
  OTermPtr proj;  // U => T
};

inline OEmbedding embed_type(const OTypePtr& t);

namespace odetail {

inline OTermPtr compose_inj(const OTypePtr& a, const OTermPtr& f, const OTermPtr& g) {
  // \x:a. g (f x)
  return o_lam("cx", a, o_app(g, o_app(f, o_var("cx"))));
}

}  // namespace odetail

/// T <| U for every pointed T, by structural recursion on T using the
/// two pairing-based embeddings and the universal retraction.
inline OEmbedding embed_type(const OTypePtr& t) {
  OTypePtr U = o_universal();
  OTypePtr NS = o_arrow(o_nat(), o_sigma());
  if (!o_pointed(t) || !otype_wellformed(t))
    fail("pointedness-violation", "embed_type needs a pointed type");
  if (otype_equal(t, U)) {
    return {t, o_lam("u", U, o_var("u")), o_lam("u", U, o_var("u"))};
  }
  switch (t->kind) {
    case OType::Kind::Sigma: {
      // inj s = \x. \y. s;  proj u = u 0 (\v. bot)
      OTermPtr inj = o_lam("s", o_sigma(), o_lam("x", o_nat(), o_lam("y", NS, o_var("s"))));
      OTermPtr proj = o_lam("u", U,
                            o_app(o_app(o_var("u"), o_lit(0)), o_lam("v", o_nat(), o_bot())));
      return {t, inj, proj};
    }
    case OType::Kind::Prod: {
      // address tagging: component i lives at addresses (pair x i)
      std::vector<OEmbedding> es;
      for (const auto& it : t->items) es.push_back(embed_type(it));
      const std::size_t k = t->items.size();
      // inj p = \x. \y. select by snd x among (inj_i (pi i p) (fst x) y)
      OTermPtr body = o_bot();
      for (std::size_t i = k; i-- > 0;) {
        OTermPtr branch = o_app(
            o_app(o_app(es[i].inj, o_proj(i + 1, o_var("p"))), o_fst(o_var("x"))), o_var("y"));
        body = o_if0(o_eq(o_snd(o_var("x")), o_lit(i)), branch, body);
      }
      OTermPtr inj = o_lam("p", t, o_lam("x", o_nat(), o_lam("y", NS, body)));
      std::vector<OTermPtr> projs;
      for (std::size_t i = 0; i < k; ++i) {
        OTermPtr slice = o_lam(
            "x", o_nat(),
            o_lam("y", NS,
                  o_app(o_app(o_var("u"), o_pair(o_var("x"), o_lit(i))), o_var("y"))));
        projs.push_back(o_app(es[i].proj, slice));
      }
      OTermPtr proj = o_lam("u", U, o_tuple(projs));
      return {t, inj, proj};
    }
    case OType::Kind::Arrow: {
      if (t->from->kind == OType::Kind::N) {
        // N => P <| N => U <| U (first pairing embedding, any codomain)
        OEmbedding ep = embed_type(t->to);
        OTypePtr NU = o_arrow(o_nat(), U);
        OTermPtr c_inj = o_lam("f", t, o_lam("n", o_nat(),
                                             o_app(ep.inj, o_app(o_var("f"), o_var("n")))));
        OTermPtr c_proj = o_lam("g", NU, o_lam("n", o_nat(),
                                               o_app(ep.proj, o_app(o_var("g"), o_var("n")))));
        // d_inj : (N => U) => U = \f. \x. f (fst x) (snd x)
        OTermPtr d_inj = o_lam("f", NU,
                               o_lam("x", o_nat(),
                                     o_app(o_app(o_var("f"), o_fst(o_var("x"))),
                                           o_snd(o_var("x")))));
        OTermPtr d_proj = o_lam("g", U,
                                o_lam("n", o_nat(),
                                      o_lam("m", o_nat(),
                                            o_app(o_var("g"), o_pair(o_var("n"), o_var("m"))))));
        OTermPtr inj = o_lam("f0", t, o_app(d_inj, o_app(c_inj, o_var("f0"))));
        OTermPtr proj = o_lam("u0", U, o_app(c_proj, o_app(d_proj, o_var("u0"))));
        return {t, inj, proj};
      }
      // R => P with R pointed: R => P <| U => U <| U
      OEmbedding er = embed_type(t->from);
      OEmbedding ep = embed_type(t->to);
      UniversalRetraction ur = universal_retraction();
      OTypePtr UU = o_arrow(U, U);
      // congruence into U => U
      OTermPtr c_inj =
          o_lam("f", t,
                o_lam("u", U, o_app(ep.inj, o_app(o_var("f"), o_app(er.proj, o_var("u"))))));
      OTermPtr c_proj =
          o_lam("g", UU,
                o_lam("r", t->from,
                      o_app(ep.proj, o_app(o_var("g"), o_app(er.inj, o_var("r"))))));
      // U => U iso N => (N=>S) => (U => S), then U => S <| U, then
      // N => (N=>S) => U iso N => N => (N=>S) => (N=>S) => S, then the
      // second pairing embedding collapses the two continuations, and the
      // first collapses the two numeral arguments.
      OTermPtr e_inj = o_lam(
          "F", UU,
          o_lam("x", o_nat(),
                o_lam("y", NS,
                      // after both collapses: address (pair x1 x2), continuation
                      // \z. y ... ; build directly:
                      o_app(
                          o_app(o_app(ur.inj,
                                      o_lam("u", U,
                                            o_app(o_app(o_app(o_var("F"), o_var("u")),
                                                        o_fst(o_var("x"))),
                                                  o_lam("z", o_nat(),
                                                        o_app(o_var("y"),
                                                              o_pair(o_var("z"), o_lit(0))))))),
                                o_snd(o_var("x"))),
                          o_lam("z", o_nat(),
                                o_app(o_var("y"), o_pair(o_var("z"), o_lit(1))))))));
      OTermPtr e_proj = o_lam(
          "g", U,
          o_lam("u", U,
                o_lam("n", o_nat(),
                      o_lam("k", NS,
                            o_app(o_app(ur.proj,
                                        o_lam("x", o_nat(),
                                              o_lam("y", NS,
                                                    o_app(o_app(o_var("g"),
                                                                o_pair(o_var("n"), o_var("x"))),
                                                          o_lam("z", o_nat(),
                                                                o_if0(o_snd(o_var("z")),
                                                                      o_app(o_var("k"),
                                                                            o_fst(o_var("z"))),
                                                                      o_app(o_var("y"),
                                                                            o_fst(o_var("z"))))))))),
                                  o_var("u"))))));
      OTermPtr inj = o_lam("f0", t, o_app(e_inj, o_app(c_inj, o_var("f0"))));
      OTermPtr proj = o_lam("u0", U, o_app(c_proj, o_app(e_proj, o_var("u0"))));
      return {t, inj, proj};
    }
    default:
      fail("pointedness-violation", "embed_type: unsupported type");
  }
}

}  // namespace bistable
