#pragma once

// Monotone-and-bistable functions as total tables between finite biorders,
// hom-set enumeration (naive generate-then-filter behind a hard budget),
// the exponential biorder, and the Cartesian-closed structure maps.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bistable/biorder.hpp"
#include "bistable/error.hpp"

namespace bistable {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t(1) << 20;

struct BiFunction {
  BiorderPtr dom;
  BiorderPtr cod;
  std::vector<std::size_t> table;  // dom index -> cod index

  std::size_t operator()(std::size_t x) const { return table[x]; }
  bool operator==(const BiFunction& o) const {
    return table == o.table && *dom == *o.dom && *cod == *o.cod;
  }
  bool operator!=(const BiFunction& o) const { return !(*this == o); }
};

inline bool is_monotone(const BiFunction& f) {
  const auto& d = *f.dom;
  const auto& c = *f.cod;
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t y = 0; y < d.size(); ++y)
      if (d.le(x, y) && !c.le(f(x), f(y))) return false;
  return true;
}

/// Preserves coherence and bistably bounded meets and joins.
inline bool is_bistable(const BiFunction& f) {
  const auto& d = *f.dom;
  const auto& c = f.cod;
  for (const auto& cl : d.classes)
    for (std::size_t x : cl)
      for (std::size_t y : cl) {
        if (!c->coherent(f(x), f(y))) return false;
        std::size_t mxy = meet(f.dom, x, y).index;
        std::size_t jxy = join(f.dom, x, y).index;
        if (f(mxy) != meet(c, f(x), f(y)).index) return false;
        if (f(jxy) != join(c, f(x), f(y)).index) return false;
      }
  return true;
}

/// Coherence of parallel functions, the exponential's class relation:
/// pointwise coherent, and f(x)^g(y) = f(y)^g(x), f(x)vg(y) = f(y)vg(x)
/// for all coherent x, y.
inline bool coherent(const BiFunction& f, const BiFunction& g) {
  if (*f.dom != *g.dom || *f.cod != *g.cod) fail("type-mismatch", "coherent: dom/cod differ");
  const auto& d = *f.dom;
  for (std::size_t x = 0; x < d.size(); ++x)
    if (!f.cod->coherent(f(x), g(x))) return false;
  for (const auto& cl : d.classes)
    for (std::size_t x : cl)
      for (std::size_t y : cl) {
        if (!f.cod->coherent(f(x), g(y)) || !f.cod->coherent(f(y), g(x))) return false;
        if (meet(f.cod, f(x), g(y)).index != meet(f.cod, f(y), g(x)).index) return false;
        if (join(f.cod, f(x), g(y)).index != join(f.cod, f(y), g(x)).index) return false;
      }
  return true;
}

/// All monotone and bistable tables dom -> cod in lexicographic table order.
/// Throws "enumeration-budget-exceeded" if |cod|^|dom| exceeds the budget.
inline std::vector<BiFunction> hom_set(const BiorderPtr& dom, const BiorderPtr& cod,
                                       std::uint64_t budget = kDefaultBudget) {
  const std::size_t nd = dom->size(), nc = cod->size();
  // Candidate count nc^nd, watching for overflow.
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < nd; ++i) {
    if (nc == 0) { count = 0; break; }
    if (count > budget / (nc == 0 ? 1 : nc) + 1) { count = budget + 1; break; }
    count *= nc;
  }
  if (count > budget)
    fail("enumeration-budget-exceeded",
         "hom-set enumeration needs " + std::to_string(nd) + " slots over " +
             std::to_string(nc) + " values (budget " + std::to_string(budget) + ")");
  std::vector<BiFunction> out;
  if (nd == 0) {
    out.push_back(BiFunction{dom, cod, {}});
    return out;
  }
  if (nc == 0) return out;  // no total maps into an empty carrier
  std::vector<std::size_t> t(nd, 0);
  while (true) {
    BiFunction f{dom, cod, t};
    if (is_monotone(f) && is_bistable(f)) out.push_back(f);
    // odometer, most significant digit first for lexicographic order
    std::size_t i = nd;
    while (i > 0) {
      --i;
      if (++t[i] < nc) break;
      t[i] = 0;
      if (i == 0) return out;
    }
  }
}

/// The exponential biorder together with its carrier <-> function mapping.
struct Exponential {
  BiorderPtr biorder;
  std::vector<BiFunction> functions;  // index-aligned with biorder->elements
  BiorderPtr dom;
  BiorderPtr cod;

  std::size_t index_of(const BiFunction& f) const {
    auto it = std::lower_bound(functions.begin(), functions.end(), f,
                               [](const BiFunction& a, const BiFunction& b) {
                                 return a.table < b.table;
                               });
    if (it == functions.end() || it->table != f.table)
      fail("not-in-hom-set", "table is not a monotone bistable function of this exponential");
    return static_cast<std::size_t>(it - functions.begin());
  }
};

inline std::string function_label(const BiFunction& f) {
  std::string l = "[";
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    if (i) l += ",";
    l += std::to_string(f.table[i]);
  }
  return l + "]";
}

inline Exponential exponential(const BiorderPtr& dom, const BiorderPtr& cod,
                               std::uint64_t budget = kDefaultBudget) {
  Exponential e;
  e.dom = dom;
  e.cod = cod;
  e.functions = hom_set(dom, cod, budget);
  const std::size_t n = e.functions.size();
  auto b = std::make_shared<FiniteBiorder>();
  for (const auto& f : e.functions) b->elements.push_back(function_label(f));
  b->leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool le = true;
      for (std::size_t x = 0; x < dom->size(); ++x)
        if (!cod->le(e.functions[i](x), e.functions[j](x))) { le = false; break; }
      b->leq[i][j] = le;
    }
  // Coherence classes via union-find over the coherent(,) relation; the
  // relation is an equivalence on monotone bistable functions.
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coherent(e.functions[i], e.functions[j])) parent[find(i)] = find(j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  for (auto& [root, members] : groups) b->classes.push_back(members);
  std::sort(b->classes.begin(), b->classes.end());
  b->class_of.assign(n, 0);
  for (std::size_t c = 0; c < b->classes.size(); ++c)
    for (std::size_t i : b->classes[c]) b->class_of[i] = c;
  e.biorder = b;
  return e;
}

// ---------------------------------------------------------------------------
// CCC structure maps. compose is diagrammatic: compose(f, g) = f then g.
// ---------------------------------------------------------------------------

inline BiFunction identity(const BiorderPtr& a) {
  BiFunction f{a, a, std::vector<std::size_t>(a->size())};
  for (std::size_t i = 0; i < a->size(); ++i) f.table[i] = i;
  return f;
}

inline BiFunction compose(const BiFunction& f, const BiFunction& g) {
  if (*f.cod != *g.dom) fail("type-mismatch", "compose: cod of first != dom of second");
  BiFunction h{f.dom, g.cod, std::vector<std::size_t>(f.table.size())};
  for (std::size_t i = 0; i < f.table.size(); ++i) h.table[i] = g(f(i));
  return h;
}

/// Pairing into a product built as product_many({f.cod, g.cod}).
inline BiFunction pair(const BiFunction& f, const BiFunction& g) {
  if (*f.dom != *g.dom) fail("type-mismatch", "pair: domains differ");
  std::vector<BiorderPtr> factors{f.cod, g.cod};
  auto prod = product_many(factors);
  BiFunction h{f.dom, prod, std::vector<std::size_t>(f.dom->size())};
  for (std::size_t i = 0; i < f.dom->size(); ++i)
    h.table[i] = product_index(factors, {f(i), g(i)});
  return h;
}

/// Projection out of product_many(factors); i is 1-based.
inline BiFunction proj(const std::vector<BiorderPtr>& factors, std::size_t i) {
  if (i == 0 || i > factors.size()) fail("type-mismatch", "proj: index out of range");
  auto prod = product_many(factors);
  BiFunction h{prod, factors[i - 1], std::vector<std::size_t>(prod->size())};
  for (std::size_t x = 0; x < prod->size(); ++x)
    h.table[x] = product_split(factors, x)[i - 1];
  return h;
}

/// curry(f : A x B -> C) : A -> (B => C), landing in exponential(B, C).
/// The returned exponential is also produced so callers can decode indices.
inline std::pair<BiFunction, Exponential> curry(const BiFunction& f, const BiorderPtr& a,
                                                const BiorderPtr& b,
                                                std::uint64_t budget = kDefaultBudget) {
  std::vector<BiorderPtr> factors{a, b};
  if (*f.dom != *product_many(factors)) fail("type-mismatch", "curry: dom is not A x B");
  Exponential e = exponential(b, f.cod, budget);
  BiFunction h{a, e.biorder, std::vector<std::size_t>(a->size())};
  for (std::size_t x = 0; x < a->size(); ++x) {
    BiFunction slice{b, f.cod, std::vector<std::size_t>(b->size())};
    for (std::size_t y = 0; y < b->size(); ++y)
      slice.table[y] = f(product_index(factors, {x, y}));
    h.table[x] = e.index_of(slice);
  }
  return {h, e};
}

/// uncurry(g : A -> (B => C)) : A x B -> C, given the exponential mapping.
inline BiFunction uncurry(const BiFunction& g, const Exponential& e, const BiorderPtr& a) {
  if (*g.cod != *e.biorder) fail("type-mismatch", "uncurry: cod is not the exponential");
  std::vector<BiorderPtr> factors{a, e.dom};
  auto prod = product_many(factors);
  BiFunction h{prod, e.cod, std::vector<std::size_t>(prod->size())};
  for (std::size_t p = 0; p < prod->size(); ++p) {
    auto c = product_split(factors, p);
    h.table[p] = e.functions[g(c[0])](c[1]);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Strictness analysis
// ---------------------------------------------------------------------------

inline bool is_bistrict(const BiFunction& f) {
  if (!is_pointed(*f.dom) || !is_pointed(*f.cod)) fail("not-pointed", "is_bistrict");
  auto dl = *least_element(*f.dom), dg = *greatest_element(*f.dom);
  auto cl = *least_element(*f.cod), cg = *greatest_element(*f.cod);
  return f(dl) == cl && f(dg) == cg;
}

/// Exact set of i (1-based) such that f is i-strict on the given product
/// factorization of its domain: component i at bot forces bot, at top
/// forces top.
inline std::set<std::size_t> strictness_indices(const BiFunction& f,
                                                const std::vector<BiorderPtr>& factors) {
  for (const auto& a : factors)
    if (!is_pointed(*a)) fail("not-pointed", "strictness_indices: factor not pointed");
  if (!is_pointed(*f.cod)) fail("not-pointed", "strictness_indices: codomain not pointed");
  if (*f.dom != *product_many(factors))
    fail("type-mismatch", "strictness_indices: factors do not multiply to dom");
  auto cl = *least_element(*f.cod), cg = *greatest_element(*f.cod);
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    auto fl = *least_element(*factors[i]);
    auto fg = *greatest_element(*factors[i]);
    bool strict = true;
    for (std::size_t x = 0; x < f.dom->size() && strict; ++x) {
      auto comps = product_split(factors, x);
      if (comps[i] == fl && f(x) != cl) strict = false;
      if (comps[i] == fg && f(x) != cg) strict = false;
    }
    if (strict) out.insert(i + 1);
  }
  return out;
}

}  // namespace bistable
