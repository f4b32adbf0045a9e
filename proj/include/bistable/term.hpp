#pragma once

// Types and terms shared by the Sigma-only calculus and SPCF, with the
// concrete S-expression grammar:
//   types  S | nat | (* T1 ... Tn) | (-> T U)
//   terms  top | bot | x | (lam (x T) M) | (M N) | (tuple M1 ... Mn)
//          (pi i M) | 0 | decimal | (succ M) | (pred M) | (if0 M) | (Y M)
//          (catch n M)
// Projections are 1-based. Numerals are unary successor chains in the core
// with decimal sugar in the parser and printer.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bistable/sexpr.hpp"

namespace bistable {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Sigma, Nat, Prod, Arrow };
  Kind kind;
  std::vector<TypePtr> items;  // Prod
  TypePtr from, to;            // Arrow
};

inline TypePtr t_sigma() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::Kind::Sigma, {}, nullptr, nullptr});
  return t;
}
inline TypePtr t_nat() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::Kind::Nat, {}, nullptr, nullptr});
  return t;
}
inline TypePtr t_prod(std::vector<TypePtr> items) {
  return std::make_shared<Type>(Type{Type::Kind::Prod, std::move(items), nullptr, nullptr});
}
inline TypePtr t_arrow(TypePtr a, TypePtr b) {
  return std::make_shared<Type>(Type{Type::Kind::Arrow, {}, std::move(a), std::move(b)});
}
/// (* S ... S) with n components.
inline TypePtr t_sigma_pow(std::size_t n) {
  return t_prod(std::vector<TypePtr>(n, t_sigma()));
}

inline bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Sigma:
    case Type::Kind::Nat:
      return true;
    case Type::Kind::Prod: {
      if (a->items.size() != b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i)
        if (!type_equal(a->items[i], b->items[i])) return false;
      return true;
    }
    case Type::Kind::Arrow:
      return type_equal(a->from, b->from) && type_equal(a->to, b->to);
  }
  return false;
}

inline std::string show_type(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma: return "S";
    case Type::Kind::Nat: return "nat";
    case Type::Kind::Prod: {
      std::string s = "(*";
      for (const auto& i : t->items) s += " " + show_type(i);
      return s + ")";
    }
    case Type::Kind::Arrow:
      return "(-> " + show_type(t->from) + " " + show_type(t->to) + ")";
  }
  return "?";
}

inline bool is_sigma_only(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma: return true;
    case Type::Kind::Nat: return false;
    case Type::Kind::Prod: {
      for (const auto& i : t->items)
        if (!is_sigma_only(i)) return false;
      return true;
    }
    case Type::Kind::Arrow:
      return is_sigma_only(t->from) && is_sigma_only(t->to);
  }
  return false;
}

inline TypePtr type_from_sexpr(const Sexpr& e) {
  if (e.is_atom) {
    if (e.atom == "S") return t_sigma();
    if (e.atom == "nat") return t_nat();
    fail("parse-error", "unknown type atom '" + e.atom + "'");
  }
  if (e.items.empty()) fail("parse-error", "empty type form");
  const Sexpr& h = e.items[0];
  if (h.is_atom && h.atom == "*") {
    std::vector<TypePtr> items;
    for (std::size_t i = 1; i < e.items.size(); ++i) items.push_back(type_from_sexpr(e.items[i]));
    return t_prod(std::move(items));
  }
  if (h.is_atom && h.atom == "->") {
    if (e.items.size() < 3) fail("parse-error", "(-> T U) needs two or more types");
    TypePtr t = type_from_sexpr(e.items.back());
    for (std::size_t i = e.items.size() - 1; i-- > 1;)
      t = t_arrow(type_from_sexpr(e.items[i]), t);
    return t;
  }
  fail("parse-error", "unknown type form");
}

inline TypePtr parse_type(const std::string& s) { return type_from_sexpr(parse_sexpr(s)); }

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind {
    Var, Lam, App, Tuple, Proj, PiConst, Top, Bot,
    Zero, Succ, Pred, If0, Y, Catch
  };
  Kind kind;
  std::string name;            // Var, Lam binder
  TypePtr ann;                 // Lam binder type; If0/PiConst branch type (after elaborate)
  std::vector<TermPtr> kids;
  std::size_t idx = 0;         // Proj/PiConst index (1-based), Catch arity
};

inline TermPtr mk(Term t) { return std::make_shared<Term>(std::move(t)); }
inline TermPtr var(std::string n) { return mk({Term::Kind::Var, std::move(n), nullptr, {}, 0}); }
inline TermPtr lam(std::string x, TypePtr t, TermPtr body) {
  return mk({Term::Kind::Lam, std::move(x), std::move(t), {std::move(body)}, 0});
}
inline TermPtr app(TermPtr f, TermPtr a) {
  return mk({Term::Kind::App, "", nullptr, {std::move(f), std::move(a)}, 0});
}
inline TermPtr app(TermPtr f, TermPtr a, TermPtr b) { return app(app(std::move(f), std::move(a)), std::move(b)); }
inline TermPtr tuple(std::vector<TermPtr> items) {
  return mk({Term::Kind::Tuple, "", nullptr, std::move(items), 0});
}
inline TermPtr proj(std::size_t i, TermPtr t) {
  return mk({Term::Kind::Proj, "", nullptr, {std::move(t)}, i});
}
inline TermPtr pi_const(std::size_t i, TypePtr ann = nullptr) {
  return mk({Term::Kind::PiConst, "", std::move(ann), {}, i});
}
inline TermPtr top() { return mk({Term::Kind::Top, "", nullptr, {}, 0}); }
inline TermPtr bot() { return mk({Term::Kind::Bot, "", nullptr, {}, 0}); }
inline TermPtr zero() { return mk({Term::Kind::Zero, "", nullptr, {}, 0}); }
inline TermPtr succ(TermPtr t) { return mk({Term::Kind::Succ, "", nullptr, {std::move(t)}, 0}); }
inline TermPtr pred(TermPtr t) { return mk({Term::Kind::Pred, "", nullptr, {std::move(t)}, 0}); }
inline TermPtr if0(TermPtr t, TypePtr ann = nullptr) {
  return mk({Term::Kind::If0, "", std::move(ann), {std::move(t)}, 0});
}
inline TermPtr yfix(TermPtr t) { return mk({Term::Kind::Y, "", nullptr, {std::move(t)}, 0}); }
inline TermPtr catch_n(std::size_t n, TermPtr t) {
  return mk({Term::Kind::Catch, "", nullptr, {std::move(t)}, n});
}
inline TermPtr numeral(std::size_t n) {
  TermPtr t = zero();
  for (std::size_t i = 0; i < n; ++i) t = succ(t);
  return t;
}

/// The numeral value of a pure successor chain, if the term is one.
inline bool as_numeral(const TermPtr& t, std::size_t& out) {
  const Term* p = t.get();
  std::size_t n = 0;
  while (p->kind == Term::Kind::Succ) { ++n; p = p->kids[0].get(); }
  if (p->kind != Term::Kind::Zero) return false;
  out = n;
  return true;
}

inline std::string show_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name;
    case Term::Kind::Lam:
      return "(lam (" + t->name + " " + show_type(t->ann) + ") " + show_term(t->kids[0]) + ")";
    case Term::Kind::App: {
      // applied projection constants print in (pi i M) form
      if (t->kids[0]->kind == Term::Kind::PiConst)
        return "(pi " + std::to_string(t->kids[0]->idx) + " " + show_term(t->kids[1]) + ")";
      return "(" + show_term(t->kids[0]) + " " + show_term(t->kids[1]) + ")";
    }
    case Term::Kind::Tuple: {
      std::string s = "(tuple";
      for (const auto& k : t->kids) s += " " + show_term(k);
      return s + ")";
    }
    case Term::Kind::Proj:
      return "(pi " + std::to_string(t->idx) + " " + show_term(t->kids[0]) + ")";
    case Term::Kind::PiConst: return "(pi " + std::to_string(t->idx) + ")";
    case Term::Kind::Top: return "top";
    case Term::Kind::Bot: return "bot";
    case Term::Kind::Zero: return "0";
    case Term::Kind::Succ: {
      std::size_t n = 0;
      if (as_numeral(t, n)) return std::to_string(n);
      return "(succ " + show_term(t->kids[0]) + ")";
    }
    case Term::Kind::Pred: return "(pred " + show_term(t->kids[0]) + ")";
    case Term::Kind::If0: return "(if0 " + show_term(t->kids[0]) + ")";
    case Term::Kind::Y: return "(Y " + show_term(t->kids[0]) + ")";
    case Term::Kind::Catch:
      return "(catch " + std::to_string(t->idx) + " " + show_term(t->kids[0]) + ")";
  }
  return "?";
}

namespace detail {

inline bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline TermPtr term_from_sexpr(const Sexpr& e) {
  if (e.is_atom) {
    if (e.atom == "top") return top();
    if (e.atom == "bot") return bot();
    if (all_digits(e.atom)) return numeral(std::stoul(e.atom));
    return var(e.atom);
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
      return lam(binder.items[0].atom, type_from_sexpr(binder.items[1]),
                 term_from_sexpr(e.items[2]));
    }
    if (s == "tuple") {
      std::vector<TermPtr> items;
      for (std::size_t i = 1; i < e.items.size(); ++i) items.push_back(term_from_sexpr(e.items[i]));
      return tuple(std::move(items));
    }
    if (s == "pi") {
      if (e.items.size() == 2 && e.items[1].is_atom && all_digits(e.items[1].atom))
        return pi_const(std::stoul(e.items[1].atom));
      arity(2, "pi");
      if (!e.items[1].is_atom || !all_digits(e.items[1].atom))
        fail("parse-error", "pi index must be a numeral");
      return proj(std::stoul(e.items[1].atom), term_from_sexpr(e.items[2]));
    }
    if (s == "succ") { arity(1, "succ"); return succ(term_from_sexpr(e.items[1])); }
    if (s == "pred") { arity(1, "pred"); return pred(term_from_sexpr(e.items[1])); }
    if (s == "if0") { arity(1, "if0"); return if0(term_from_sexpr(e.items[1])); }
    if (s == "Y") { arity(1, "Y"); return yfix(term_from_sexpr(e.items[1])); }
    if (s == "catch") {
      arity(2, "catch");
      if (!e.items[1].is_atom || !all_digits(e.items[1].atom))
        fail("parse-error", "catch arity must be a numeral");
      std::size_t n = std::stoul(e.items[1].atom);
      if (n < 1) fail("parse-error", "catch arity must be >= 1");
      return catch_n(n, term_from_sexpr(e.items[2]));
    }
  }
  // application, left associated
  if (e.items.size() < 2) fail("parse-error", "application needs an argument");
  TermPtr t = term_from_sexpr(e.items[0]);
  for (std::size_t i = 1; i < e.items.size(); ++i) t = app(t, term_from_sexpr(e.items[i]));
  return t;
}

}  // namespace detail

inline TermPtr parse_term(const std::string& s) {
  return detail::term_from_sexpr(parse_sexpr(s));
}

// ---------------------------------------------------------------------------
// Typechecking. elaborate() returns the term with If0 nodes annotated with
// their branch type, which later stepping needs for the IF0 -> pi rewrite.
// ---------------------------------------------------------------------------

using TypeEnv = std::map<std::string, TypePtr>;

struct Typed {
  TermPtr term;
  TypePtr type;
};

inline Typed elaborate(const TypeEnv& env, const TermPtr& t);

inline TypePtr typecheck(const TypeEnv& env, const TermPtr& t) {
  return elaborate(env, t).type;
}

inline Typed elaborate(const TypeEnv& env, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) fail("type-error", "unbound variable '" + t->name + "'");
      return {t, it->second};
    }
    case Term::Kind::Lam: {
      TypeEnv e2 = env;
      e2[t->name] = t->ann;
      Typed body = elaborate(e2, t->kids[0]);
      return {lam(t->name, t->ann, body.term), t_arrow(t->ann, body.type)};
    }
    case Term::Kind::App: {
      // IF0 and projection constants type only in applied position.
      if (t->kids[0]->kind == Term::Kind::If0) {
        Typed scrut = elaborate(env, t->kids[0]->kids[0]);
        if (scrut.type->kind != Type::Kind::Nat)
          fail("type-error", "if0 scrutinee must have type nat");
        Typed arg = elaborate(env, t->kids[1]);
        if (arg.type->kind != Type::Kind::Prod || arg.type->items.size() != 2 ||
            !type_equal(arg.type->items[0], arg.type->items[1]))
          fail("type-error", "if0 branches must form a pair (* T T)");
        TypePtr branch = arg.type->items[0];
        if (branch->kind != Type::Kind::Sigma && branch->kind != Type::Kind::Nat)
          fail("type-error", "if0 branch type must be S or nat");
        return {app(if0(scrut.term, branch), arg.term), branch};
      }
      if (t->kids[0]->kind == Term::Kind::PiConst) {
        Typed arg = elaborate(env, t->kids[1]);
        if (arg.type->kind != Type::Kind::Prod)
          fail("type-error", "projection of a non-product");
        std::size_t i = t->kids[0]->idx;
        if (i == 0 || i > arg.type->items.size())
          fail("type-error", "projection index out of range");
        return {app(pi_const(i, arg.type), arg.term), arg.type->items[i - 1]};
      }
      Typed f = elaborate(env, t->kids[0]);
      Typed a = elaborate(env, t->kids[1]);
      if (f.type->kind != Type::Kind::Arrow)
        fail("type-error", "application of a non-function (" + show_type(f.type) + ")");
      if (!type_equal(f.type->from, a.type))
        fail("type-error", "argument type " + show_type(a.type) + " does not match " +
                               show_type(f.type->from));
      return {app(f.term, a.term), f.type->to};
    }
    case Term::Kind::Tuple: {
      std::vector<TermPtr> ks;
      std::vector<TypePtr> ts;
      for (const auto& k : t->kids) {
        Typed kt = elaborate(env, k);
        ks.push_back(kt.term);
        ts.push_back(kt.type);
      }
      return {tuple(std::move(ks)), t_prod(std::move(ts))};
    }
    case Term::Kind::Proj: {
      Typed body = elaborate(env, t->kids[0]);
      if (body.type->kind != Type::Kind::Prod)
        fail("type-error", "projection of a non-product");
      if (t->idx == 0 || t->idx > body.type->items.size())
        fail("type-error", "projection index " + std::to_string(t->idx) + " out of range");
      return {proj(t->idx, body.term), body.type->items[t->idx - 1]};
    }
    case Term::Kind::PiConst: {
      if (!t->ann) fail("type-error", "bare projection constant needs an applied position");
      if (t->idx == 0 || t->idx > t->ann->items.size())
        fail("type-error", "projection index out of range");
      return {t, t_arrow(t->ann, t->ann->items[t->idx - 1])};
    }
    case Term::Kind::Top:
    case Term::Kind::Bot:
      return {t, t_sigma()};
    case Term::Kind::Zero:
      return {t, t_nat()};
    case Term::Kind::Succ:
    case Term::Kind::Pred: {
      Typed body = elaborate(env, t->kids[0]);
      if (body.type->kind != Type::Kind::Nat)
        fail("type-error", "succ/pred of a non-numeral");
      return {t->kind == Term::Kind::Succ ? succ(body.term) : pred(body.term), t_nat()};
    }
    case Term::Kind::If0:
      fail("type-error", "if0 must be applied to its branch pair");
    case Term::Kind::Y: {
      Typed body = elaborate(env, t->kids[0]);
      if (body.type->kind != Type::Kind::Arrow || !type_equal(body.type->from, body.type->to))
        fail("type-error", "Y needs an argument of type (-> T T)");
      // annotate with the fixpoint type; the denotational side dispatches on it
      return {mk({Term::Kind::Y, "", body.type->from, {body.term}, 0}), body.type->from};
    }
    case Term::Kind::Catch: {
      Typed body = elaborate(env, t->kids[0]);
      TypePtr want = t_arrow(t_sigma_pow(t->idx), t_sigma());
      if (!type_equal(body.type, want))
        fail("type-error", "catch " + std::to_string(t->idx) + " needs argument of type " +
                               show_type(want));
      return {catch_n(t->idx, body.term), t_nat()};
    }
  }
  fail("type-error", "unreachable");
}

/// True when the term uses only the Sigma-calculus fragment
/// (no nat constants, recursion, or control).
inline bool is_sigma_only_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Zero:
    case Term::Kind::Succ:
    case Term::Kind::Pred:
    case Term::Kind::If0:
    case Term::Kind::Y:
    case Term::Kind::Catch:
      return false;
    case Term::Kind::Lam:
      if (!is_sigma_only(t->ann)) return false;
      break;
    default:
      break;
  }
  for (const auto& k : t->kids)
    if (!is_sigma_only_term(k)) return false;
  return true;
}

}  // namespace bistable
