#pragma once

// Denotational core. Terms evaluate to semantic values (ground points,
// tuples, closures); reify/reflect convert between semantic values and
// carrier indices of the denoted biorders. Closures are only tabulated at
// the type where a comparison is requested, so higher-order terms whose
// intermediate types are beyond the enumeration budget still evaluate.
//
// nat at cutoff k denotes bilift(flat(k)): carrier [bot, 0..k-1, top];
// succ overflows to bot, pred 0 is bot.
//
// Y dispatch: at types whose comparison domains enumerate within budget,
// Kleene iteration from bottom with extensional stabilization; otherwise
// finite unfolding from a tainted bottom. Taint marks values that could
// still grow with deeper unfolding; a taint-free result is exact, and
// callers deepen the unfolding until the result is taint-free.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bistable/bifun.hpp"
#include "bistable/biorder.hpp"
#include "bistable/term.hpp"

namespace bistable {

struct TypeDen {
  BiorderPtr bi;
  std::shared_ptr<const Exponential> expo;  // set for Arrow
  std::vector<BiorderPtr> factors;          // set for Prod
};

class DenoteCtx {
 public:
  explicit DenoteCtx(std::size_t cutoff = 8, std::uint64_t budget = kDefaultBudget)
      : cutoff_(cutoff), budget_(budget) {
    if (cutoff_ < 1) fail("bad-cutoff", "cutoff must be at least 1");
  }

  std::size_t cutoff() const { return cutoff_; }
  std::uint64_t budget() const { return budget_; }

  const TypeDen& den(const TypePtr& t) const {
    const std::string key = show_type(t);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return *it->second;
    }
    auto d = std::make_shared<TypeDen>(build(t));
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, fresh] = cache_.emplace(key, std::move(d));
    return *it->second;
  }

 private:
  TypeDen build(const TypePtr& t) const {
    TypeDen d;
    switch (t->kind) {
      case Type::Kind::Sigma:
        d.bi = sigma();
        break;
      case Type::Kind::Nat:
        d.bi = bilift(flat(cutoff_));
        break;
      case Type::Kind::Prod: {
        for (const auto& i : t->items) d.factors.push_back(den(i).bi);
        d.bi = product_many(d.factors);
        break;
      }
      case Type::Kind::Arrow: {
        const TypeDen& a = den(t->from);
        const TypeDen& b = den(t->to);
        d.expo = std::make_shared<Exponential>(exponential(a.bi, b.bi, budget_));
        d.bi = d.expo->biorder;
        break;
      }
    }
    return d;
  }

  std::size_t cutoff_;
  std::uint64_t budget_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<TypeDen>> cache_;
};

// ---------------------------------------------------------------------------
// Semantic values
// ---------------------------------------------------------------------------

struct SemV;
using SemFn = std::function<SemV(const SemV&)>;

struct SemV {
  enum class K { Ground, Tuple, Fn, Taint };
  K k = K::Ground;
  std::size_t idx = 0;                           // Ground
  std::shared_ptr<std::vector<SemV>> items;      // Tuple
  std::shared_ptr<SemFn> fn;                     // Fn
  TypePtr taint_ty;                              // Taint

  static SemV ground(std::size_t i) { return SemV{K::Ground, i, nullptr, nullptr, nullptr}; }
  static SemV tup(std::vector<SemV> xs) {
    return SemV{K::Tuple, 0, std::make_shared<std::vector<SemV>>(std::move(xs)), nullptr,
                nullptr};
  }
  static SemV func(SemFn f) {
    return SemV{K::Fn, 0, nullptr, std::make_shared<SemFn>(std::move(f)), nullptr};
  }
  static SemV taint(TypePtr t) { return SemV{K::Taint, 0, nullptr, nullptr, std::move(t)}; }
};

struct EvalState {
  const DenoteCtx* ctx;
  int ydepth;  // unfolding budget for fixpoints beyond the comparison budget
};

namespace detail {

struct EnvNode {
  std::string name;
  SemV v;
  std::shared_ptr<const EnvNode> next;
};
using SemEnv = std::shared_ptr<const EnvNode>;

inline SemEnv extend(const SemEnv& env, const std::string& n, SemV v) {
  return std::make_shared<EnvNode>(EnvNode{n, std::move(v), env});
}

inline const SemV& lookup(const SemEnv& env, const std::string& n) {
  for (const EnvNode* p = env.get(); p; p = p->next.get())
    if (p->name == n) return p->v;
  fail("internal", "unbound variable at evaluation time: " + n);
}

}  // namespace detail

inline SemV sem_bottom(const DenoteCtx& ctx, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma:
    case Type::Kind::Nat:
      return SemV::ground(0);
    case Type::Kind::Prod: {
      std::vector<SemV> xs;
      for (const auto& i : t->items) xs.push_back(sem_bottom(ctx, i));
      return SemV::tup(std::move(xs));
    }
    case Type::Kind::Arrow: {
      TypePtr to = t->to;
      const DenoteCtx* c = &ctx;
      return SemV::func([c, to](const SemV&) { return sem_bottom(*c, to); });
    }
  }
  fail("internal", "sem_bottom");
}

inline SemV sem_top(const DenoteCtx& ctx, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma:
      return SemV::ground(1);
    case Type::Kind::Nat:
      return SemV::ground(ctx.cutoff() + 1);
    case Type::Kind::Prod: {
      std::vector<SemV> xs;
      for (const auto& i : t->items) xs.push_back(sem_top(ctx, i));
      return SemV::tup(std::move(xs));
    }
    case Type::Kind::Arrow: {
      TypePtr to = t->to;
      const DenoteCtx* c = &ctx;
      return SemV::func([c, to](const SemV&) { return sem_top(*c, to); });
    }
  }
  fail("internal", "sem_top");
}

inline SemV sem_apply(const SemV& f, const SemV& a) {
  if (f.k == SemV::K::Fn) return (*f.fn)(a);
  if (f.k == SemV::K::Taint) {
    if (f.taint_ty->kind != Type::Kind::Arrow) fail("internal", "taint applied at non-arrow");
    return SemV::taint(f.taint_ty->to);
  }
  fail("internal", "application of a non-function value");
}

inline SemV sem_proj(const SemV& v, std::size_t i /*1-based*/) {
  if (v.k == SemV::K::Tuple) return (*v.items)[i - 1];
  if (v.k == SemV::K::Taint) {
    if (v.taint_ty->kind != Type::Kind::Prod) fail("internal", "taint projected at non-product");
    return SemV::taint(v.taint_ty->items[i - 1]);
  }
  fail("internal", "projection of a non-tuple value");
}

// reify: nullopt when the value involves an unfolding approximation (taint).
inline std::optional<std::size_t> reify(const DenoteCtx& ctx, const SemV& v, const TypePtr& t);
inline SemV reflect(const DenoteCtx& ctx, std::size_t idx, const TypePtr& t);

inline std::optional<std::size_t> reify(const DenoteCtx& ctx, const SemV& v, const TypePtr& t) {
  if (v.k == SemV::K::Taint) return std::nullopt;
  switch (t->kind) {
    case Type::Kind::Sigma:
    case Type::Kind::Nat:
      if (v.k != SemV::K::Ground) fail("internal", "reify: ground value expected");
      return v.idx;
    case Type::Kind::Prod: {
      if (v.k != SemV::K::Tuple) fail("internal", "reify: tuple value expected");
      const TypeDen& d = ctx.den(t);
      std::vector<std::size_t> comps;
      for (std::size_t i = 0; i < t->items.size(); ++i) {
        auto r = reify(ctx, (*v.items)[i], t->items[i]);
        if (!r) return std::nullopt;
        comps.push_back(*r);
      }
      return product_index(d.factors, comps);
    }
    case Type::Kind::Arrow: {
      if (v.k != SemV::K::Fn) fail("internal", "reify: function value expected");
      const TypeDen& d = ctx.den(t);
      const TypeDen& da = ctx.den(t->from);
      BiFunction f{da.bi, ctx.den(t->to).bi, {}};
      f.table.resize(da.bi->size());
      for (std::size_t a = 0; a < da.bi->size(); ++a) {
        SemV ra = reflect(ctx, a, t->from);
        auto r = reify(ctx, sem_apply(v, ra), t->to);
        if (!r) return std::nullopt;
        f.table[a] = *r;
      }
      return d.expo->index_of(f);
    }
  }
  fail("internal", "reify");
}

inline SemV reflect(const DenoteCtx& ctx, std::size_t idx, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma:
    case Type::Kind::Nat:
      return SemV::ground(idx);
    case Type::Kind::Prod: {
      const TypeDen& d = ctx.den(t);
      auto comps = product_split(d.factors, idx);
      std::vector<SemV> xs;
      for (std::size_t i = 0; i < t->items.size(); ++i)
        xs.push_back(reflect(ctx, comps[i], t->items[i]));
      return SemV::tup(std::move(xs));
    }
    case Type::Kind::Arrow: {
      const DenoteCtx* c = &ctx;
      TypePtr from = t->from, to = t->to, whole = t;
      return SemV::func([c, idx, from, to, whole](const SemV& arg) -> SemV {
        auto a = reify(*c, arg, from);
        if (!a) return SemV::taint(to);  // argument may still grow; so may the result
        const TypeDen& d = c->den(whole);
        return reflect(*c, d.expo->functions[idx].table[*a], to);
      });
    }
  }
  fail("internal", "reflect");
}

/// Extensional comparison; nullopt when taint prevents a verdict. Unlike
/// reify, this only needs the domain carriers along the arrow spine, not
/// the ambient exponentials.
inline std::optional<bool> sem_equal(const DenoteCtx& ctx, const SemV& a, const SemV& b,
                                     const TypePtr& t) {
  if (a.k == SemV::K::Taint || b.k == SemV::K::Taint) return std::nullopt;
  switch (t->kind) {
    case Type::Kind::Sigma:
    case Type::Kind::Nat:
      return a.idx == b.idx;
    case Type::Kind::Prod: {
      for (std::size_t i = 0; i < t->items.size(); ++i) {
        auto r = sem_equal(ctx, (*a.items)[i], (*b.items)[i], t->items[i]);
        if (!r) return std::nullopt;
        if (!*r) return false;
      }
      return true;
    }
    case Type::Kind::Arrow: {
      const TypeDen& da = ctx.den(t->from);
      for (std::size_t x = 0; x < da.bi->size(); ++x) {
        SemV rx = reflect(ctx, x, t->from);
        auto r = sem_equal(ctx, sem_apply(a, rx), sem_apply(b, rx), t->to);
        if (!r) return std::nullopt;
        if (!*r) return false;
      }
      return true;
    }
  }
  fail("internal", "sem_equal");
}

/// True when extensional comparison at this type only needs enumerations
/// that fit the budget.
inline bool comparison_feasible(const DenoteCtx& ctx, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sigma:
    case Type::Kind::Nat:
      return true;
    case Type::Kind::Prod:
      for (const auto& i : t->items)
        if (!comparison_feasible(ctx, i)) return false;
      return true;
    case Type::Kind::Arrow: {
      try {
        ctx.den(t->from);
      } catch (const Error& e) {
        if (e.code() == "enumeration-budget-exceeded") return false;
        throw;
      }
      return comparison_feasible(ctx, t->to);
    }
  }
  return false;
}

namespace detail {

inline constexpr int kKleeneIterLimit = 100000;

inline SemV y_value(const EvalState& st, const SemV& f, const TypePtr& t) {
  if (comparison_feasible(*st.ctx, t)) {
    SemV v = sem_bottom(*st.ctx, t);
    for (int i = 0; i < kKleeneIterLimit; ++i) {
      SemV v2 = sem_apply(f, v);
      auto eq = sem_equal(*st.ctx, v, v2, t);
      if (!eq) return SemV::taint(t);  // approximation inside; defer to outer deepening
      if (*eq) return v;
      v = v2;
    }
    fail("internal", "fixpoint iteration did not stabilize");
  }
  SemV v = SemV::taint(t);
  for (int j = 0; j < st.ydepth; ++j) v = sem_apply(f, v);
  return v;
}

/// Cutoff interpretation of catch_n applied to a value of type Sigma^n => Sigma.
/// Probes the function at bottom and at the n one-top points; strong
/// sequentiality makes the answer unique. Taint in a probe taints the result
/// unless a clean verdict is already forced.
inline SemV catch_value(const EvalState& st, const SemV& vf, std::size_t n) {
  const std::size_t k = st.ctx->cutoff();
  auto nat_bot = SemV::ground(0);
  auto nat_top = SemV::ground(k + 1);
  if (vf.k == SemV::K::Taint) return SemV::taint(t_nat());

  auto probe = [&](std::size_t top_at /* 0 = none, else 1-based */) {
    std::vector<SemV> xs;
    for (std::size_t i = 1; i <= n; ++i)
      xs.push_back(SemV::ground(i == top_at ? 1 : 0));
    return sem_apply(vf, SemV::tup(std::move(xs)));
  };

  SemV r0 = probe(0);
  if (r0.k == SemV::K::Taint) return SemV::taint(t_nat());
  if (r0.idx == 1) return nat_top;  // constant top
  bool any_taint = false;
  std::optional<std::size_t> strict_at;
  for (std::size_t i = 1; i <= n; ++i) {
    SemV ri = probe(i);
    if (ri.k == SemV::K::Taint) { any_taint = true; continue; }
    if (ri.idx == 1) {
      if (strict_at) fail("internal", "catch: two strictness indices (non-bistable value)");
      strict_at = i;
    }
  }
  if (strict_at) {
    std::size_t value = *strict_at - 1;  // 1-based projection to 0-based numeral
    if (value >= k) return nat_bot;      // beyond the cutoff, as with succ overflow
    return SemV::ground(value + 1);
  }
  if (any_taint) return SemV::taint(t_nat());
  return nat_bot;  // constant bottom
}

inline SemV eval_sem(const EvalState& st, const TermPtr& t, const SemEnv& env) {
  const DenoteCtx& ctx = *st.ctx;
  switch (t->kind) {
    case Term::Kind::Var:
      return lookup(env, t->name);
    case Term::Kind::Lam: {
      TermPtr body = t->kids[0];
      std::string name = t->name;
      EvalState st2 = st;
      SemEnv captured = env;
      return SemV::func([st2, body, name, captured](const SemV& arg) {
        return eval_sem(st2, body, extend(captured, name, arg));
      });
    }
    case Term::Kind::App: {
      SemV f = eval_sem(st, t->kids[0], env);
      SemV a = eval_sem(st, t->kids[1], env);
      return sem_apply(f, a);
    }
    case Term::Kind::Tuple: {
      std::vector<SemV> xs;
      for (const auto& k2 : t->kids) xs.push_back(eval_sem(st, k2, env));
      return SemV::tup(std::move(xs));
    }
    case Term::Kind::Proj:
      return sem_proj(eval_sem(st, t->kids[0], env), t->idx);
    case Term::Kind::PiConst: {
      std::size_t i = t->idx;
      return SemV::func([i](const SemV& v) { return sem_proj(v, i); });
    }
    case Term::Kind::Top:
      return SemV::ground(1);
    case Term::Kind::Bot:
      return SemV::ground(0);
    case Term::Kind::Zero:
      return SemV::ground(1);  // numeral 0 sits above bot in bilift(flat(k))
    case Term::Kind::Succ: {
      SemV v = eval_sem(st, t->kids[0], env);
      if (v.k == SemV::K::Taint) return SemV::taint(t_nat());
      const std::size_t k = ctx.cutoff();
      if (v.idx == 0 || v.idx == k + 1) return v;     // strict at bot/top
      std::size_t j = v.idx - 1;
      return j + 1 < k ? SemV::ground(j + 2) : SemV::ground(0);  // overflow -> bot
    }
    case Term::Kind::Pred: {
      SemV v = eval_sem(st, t->kids[0], env);
      if (v.k == SemV::K::Taint) return SemV::taint(t_nat());
      const std::size_t k = ctx.cutoff();
      if (v.idx == 0 || v.idx == k + 1) return v;
      std::size_t j = v.idx - 1;
      return j == 0 ? SemV::ground(0) : SemV::ground(j);  // pred 0 -> bot
    }
    case Term::Kind::If0: {
      SemV v = eval_sem(st, t->kids[0], env);
      TypePtr branch = t->ann;
      const DenoteCtx* c = st.ctx;
      const std::size_t k = ctx.cutoff();
      return SemV::func([v, branch, c, k](const SemV& pr) -> SemV {
        if (v.k == SemV::K::Taint) return SemV::taint(branch);
        if (v.idx == 0) return sem_bottom(*c, branch);
        if (v.idx == k + 1) return sem_top(*c, branch);
        return sem_proj(pr, v.idx - 1 == 0 ? 1 : 2);
      });
    }
    case Term::Kind::Y: {
      SemV f = eval_sem(st, t->kids[0], env);
      return y_value(st, f, t->ann);
    }
    case Term::Kind::Catch: {
      SemV vf = eval_sem(st, t->kids[0], env);
      return catch_value(st, vf, t->idx);
    }
  }
  fail("internal", "eval_sem");
}

inline constexpr int kMaxUnfoldDepth = 1 << 13;

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

struct DenotedValue {
  TypePtr type;
  Element element;
};

/// Denotes a closed term as an element of its denoted type. Requires the
/// type's own enumerations to fit the budget; intermediate types need not.
inline DenotedValue denote_element(const DenoteCtx& ctx, const TermPtr& term,
                                   const TypeEnv& tenv = {},
                                   const std::map<std::string, Element>& env = {}) {
  Typed typed = elaborate(tenv, term);
  detail::SemEnv senv;
  for (const auto& [name, el] : env) {
    auto it = tenv.find(name);
    if (it == tenv.end()) fail("type-error", "environment value without a type: " + name);
    senv = detail::extend(senv, name, reflect(ctx, el.index, it->second));
  }
  for (int d = 1; d <= detail::kMaxUnfoldDepth; d *= 2) {
    EvalState st{&ctx, d};
    SemV v = detail::eval_sem(st, typed.term, senv);
    auto r = reify(ctx, v, typed.type);
    if (r) return {typed.type, Element{ctx.den(typed.type).bi, *r}};
  }
  fail("fixpoint-budget-exceeded",
       "fixpoint unfolding did not settle within depth " +
           std::to_string(detail::kMaxUnfoldDepth));
}

/// Denotes a closed term of arrow type as a function table, without
/// enumerating the ambient exponential.
inline BiFunction denote_bifun(const DenoteCtx& ctx, const TermPtr& term) {
  Typed typed = elaborate({}, term);
  if (typed.type->kind != Type::Kind::Arrow)
    fail("type-error", "denote_bifun needs a term of arrow type");
  const TypeDen& da = ctx.den(typed.type->from);
  const TypeDen& db = ctx.den(typed.type->to);
  for (int d = 1; d <= detail::kMaxUnfoldDepth; d *= 2) {
    EvalState st{&ctx, d};
    SemV v = detail::eval_sem(st, typed.term, nullptr);
    BiFunction f{da.bi, db.bi, std::vector<std::size_t>(da.bi->size())};
    bool clean = true;
    for (std::size_t a = 0; a < da.bi->size() && clean; ++a) {
      SemV ra = reflect(ctx, a, typed.type->from);
      auto r = reify(ctx, sem_apply(v, ra), typed.type->to);
      if (!r) { clean = false; break; }
      f.table[a] = *r;
    }
    if (clean) return f;
  }
  fail("fixpoint-budget-exceeded", "fixpoint unfolding did not settle (table)");
}

/// Semantic equality of two closed terms of the same type.
inline bool theory_equal(const DenoteCtx& ctx, const TermPtr& m, const TermPtr& n) {
  Typed tm = elaborate({}, m);
  Typed tn = elaborate({}, n);
  if (!type_equal(tm.type, tn.type))
    fail("type-error", "theory_equal: terms have different types");
  return denote_element(ctx, m).element.index == denote_element(ctx, n).element.index;
}

}  // namespace bistable
