#pragma once

// Finite bistable biorders: a carrier with an extensional order and a
// coherence partition whose classes are distributive lattices, with class
// meets/joins agreeing with global glb/lub. Constructions: sigma, unit,
// flat(k), product, coproduct, bilifting. All values are immutable after
// construction; every operation here is a pure function.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bistable/error.hpp"

namespace bistable {

struct FiniteBiorder;
using BiorderPtr = std::shared_ptr<const FiniteBiorder>;

/// Carrier + extensional order (closed relation) + coherence partition.
/// `leq[i][j]` means element i <=E element j. `class_of[i]` is the index of
/// i's coherence class in `classes`; classes hold sorted element indices.
struct FiniteBiorder {
  std::vector<std::string> elements;
  std::vector<std::vector<bool>> leq;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;

  std::size_t size() const { return elements.size(); }
  bool le(std::size_t a, std::size_t b) const { return leq[a][b]; }
  bool coherent(std::size_t a, std::size_t b) const { return class_of[a] == class_of[b]; }

  bool operator==(const FiniteBiorder& o) const {
    return elements == o.elements && leq == o.leq && classes == o.classes;
  }
  bool operator!=(const FiniteBiorder& o) const { return !(*this == o); }
};

struct Element {
  BiorderPtr biorder;
  std::size_t index = 0;

  const std::string& label() const { return biorder->elements[index]; }
  bool operator==(const Element& o) const {
    return index == o.index && *biorder == *o.biorder;
  }
};

struct Diagnostic {
  std::string code;
  std::string message;
};

namespace detail {

inline void close_reflexive_transitive(std::vector<std::vector<bool>>& r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
}

/// Global glb of {a,b} in (carrier, <=E), if it exists. Two passes: climb
/// to a maximal lower bound, then verify it dominates every lower bound.
inline std::optional<std::size_t> global_meet(const FiniteBiorder& b, std::size_t x,
                                              std::size_t y) {
  std::optional<std::size_t> cand;
  for (std::size_t c = 0; c < b.size(); ++c)
    if (b.le(c, x) && b.le(c, y) && (!cand || b.le(*cand, c))) cand = c;
  if (!cand) return std::nullopt;
  for (std::size_t c = 0; c < b.size(); ++c)
    if (b.le(c, x) && b.le(c, y) && !b.le(c, *cand)) return std::nullopt;
  return cand;
}

inline std::optional<std::size_t> global_join(const FiniteBiorder& b, std::size_t x,
                                              std::size_t y) {
  std::optional<std::size_t> cand;
  for (std::size_t c = 0; c < b.size(); ++c)
    if (b.le(x, c) && b.le(y, c) && (!cand || b.le(c, *cand))) cand = c;
  if (!cand) return std::nullopt;
  for (std::size_t c = 0; c < b.size(); ++c)
    if (b.le(x, c) && b.le(y, c) && !b.le(*cand, c)) return std::nullopt;
  return cand;
}

}  // namespace detail

/// Builds a biorder from raw parts. `leq_pairs` may be any generating set;
/// it is closed reflexively and transitively. The class partition is taken
/// as given. No validation beyond basic index bounds; run validate() for
/// the axioms.
inline BiorderPtr make_biorder(std::vector<std::string> elements,
                               const std::vector<std::pair<std::size_t, std::size_t>>& leq_pairs,
                               const std::vector<std::vector<std::size_t>>& classes) {
  auto b = std::make_shared<FiniteBiorder>();
  const std::size_t n = elements.size();
  b->elements = std::move(elements);
  b->leq.assign(n, std::vector<bool>(n, false));
  for (auto [i, j] : leq_pairs) {
    if (i >= n || j >= n) fail("bad-index", "leq pair out of range");
    b->leq[i][j] = true;
  }
  detail::close_reflexive_transitive(b->leq);
  b->classes = classes;
  for (auto& cl : b->classes) std::sort(cl.begin(), cl.end());
  b->class_of.assign(n, n);
  for (std::size_t c = 0; c < b->classes.size(); ++c)
    for (std::size_t i : b->classes[c]) {
      if (i >= n) fail("bad-index", "class member out of range");
      b->class_of[i] = c;
    }
  return b;
}

/// Checks every FiniteBiorder invariant, reporting all violations.
inline std::vector<Diagnostic> validate(const FiniteBiorder& b) {
  std::vector<Diagnostic> out;
  const std::size_t n = b.size();
  auto lbl = [&](std::size_t i) { return b.elements[i]; };

  if (b.leq.size() != n)
    out.push_back({"malformed", "leq matrix size does not match carrier"});
  if (b.class_of.size() != n)
    out.push_back({"malformed", "class map size does not match carrier"});
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < n; ++i)
    if (!b.leq[i][i]) out.push_back({"not-reflexive", "missing " + lbl(i) + " <= " + lbl(i)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && b.leq[i][j] && b.leq[j][i])
        out.push_back({"not-antisymmetric", lbl(i) + " and " + lbl(j) + " are order-equivalent"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (b.leq[i][j])
        for (std::size_t k = 0; k < n; ++k)
          if (b.leq[j][k] && !b.leq[i][k])
            out.push_back({"not-transitive",
                           lbl(i) + " <= " + lbl(j) + " <= " + lbl(k) + " but not " + lbl(i) +
                               " <= " + lbl(k)});

  // Partition check.
  std::vector<int> seen(n, 0);
  for (const auto& cl : b.classes)
    for (std::size_t i : cl) {
      if (i < n) seen[i]++;
    }
  for (std::size_t i = 0; i < n; ++i)
    if (seen[i] != 1)
      out.push_back({"not-a-partition", lbl(i) + " appears in " + std::to_string(seen[i]) +
                                            " classes"});
  if (!out.empty()) return out;

  // Class meets/joins exist globally and stay in the class; classes are
  // distributive lattices under the induced order. Pairwise tables are
  // cached per class so the distributivity sweep is lookups only.
  for (const auto& cl : b.classes) {
    const std::size_t c = cl.size();
    std::vector<std::size_t> pos(n, 0);
    for (std::size_t i = 0; i < c; ++i) pos[cl[i]] = i;
    std::vector<std::optional<std::size_t>> mt(c * c), jt(c * c);
    bool class_ok = true;
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j2 = 0; j2 < c; ++j2) {
        auto m = detail::global_meet(b, cl[i], cl[j2]);
        auto j = detail::global_join(b, cl[i], cl[j2]);
        if (!m) {
          out.push_back({"no-class-meet", "{" + lbl(cl[i]) + "," + lbl(cl[j2]) + "} has no glb"});
          class_ok = false;
        } else if (b.class_of[*m] != b.class_of[cl[i]]) {
          out.push_back({"meet-outside-class",
                         "glb of {" + lbl(cl[i]) + "," + lbl(cl[j2]) + "} is " + lbl(*m)});
          class_ok = false;
        }
        if (!j) {
          out.push_back({"no-class-join", "{" + lbl(cl[i]) + "," + lbl(cl[j2]) + "} has no lub"});
          class_ok = false;
        } else if (b.class_of[*j] != b.class_of[cl[i]]) {
          out.push_back({"join-outside-class",
                         "lub of {" + lbl(cl[i]) + "," + lbl(cl[j2]) + "} is " + lbl(*j)});
          class_ok = false;
        }
        mt[i * c + j2] = m;
        jt[i * c + j2] = j;
      }
    if (!class_ok) continue;
    for (std::size_t a = 0; a < c && out.size() < 100; ++a)
      for (std::size_t x = 0; x < c; ++x)
        for (std::size_t y = 0; y < c; ++y) {
          std::size_t xy = pos[*mt[x * c + y]];
          std::size_t lhs = *jt[a * c + xy];
          std::size_t rhs = *mt[pos[*jt[a * c + x]] * c + pos[*jt[a * c + y]]];
          if (lhs != rhs)
            out.push_back({"not-distributive",
                           lbl(cl[a]) + " v (" + lbl(cl[x]) + " ^ " + lbl(cl[y]) +
                               ") differs from (" + lbl(cl[a]) + " v " + lbl(cl[x]) + ") ^ (" +
                               lbl(cl[a]) + " v " + lbl(cl[y]) + ")"});
        }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// The two-point base biorder bot <=E top, one coherence class.
inline BiorderPtr sigma() {
  return make_biorder({"bot", "top"}, {{0, 1}}, {{0, 1}});
}

inline BiorderPtr empty_biorder() { return make_biorder({}, {}, {}); }

/// k discrete points, singleton classes (the flat numerals before bilifting).
inline BiorderPtr flat(std::size_t k) {
  std::vector<std::string> els;
  std::vector<std::vector<std::size_t>> cls;
  for (std::size_t i = 0; i < k; ++i) {
    els.push_back(std::to_string(i));
    cls.push_back({i});
  }
  return make_biorder(std::move(els), {}, cls);
}

inline BiorderPtr unit_biorder() {
  return make_biorder({"()"}, {}, {{0}});
}

/// n-ary product: carrier = tuples in lexicographic (mixed-radix) order,
/// order and coherence componentwise. product_index/product_split convert
/// between a tuple of component indices and the carrier index.
inline std::size_t product_index(const std::vector<BiorderPtr>& factors,
                                 const std::vector<std::size_t>& comps) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) idx = idx * factors[i]->size() + comps[i];
  return idx;
}

inline std::vector<std::size_t> product_split(const std::vector<BiorderPtr>& factors,
                                              std::size_t idx) {
  std::vector<std::size_t> comps(factors.size(), 0);
  for (std::size_t i = factors.size(); i-- > 0;) {
    comps[i] = idx % factors[i]->size();
    idx /= factors[i]->size();
  }
  return comps;
}

inline BiorderPtr product_many(const std::vector<BiorderPtr>& factors) {
  std::size_t n = 1;
  for (const auto& f : factors) n *= f->size();
  std::vector<std::string> els(n);
  std::vector<std::size_t> comps(factors.size(), 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    auto cs = product_split(factors, idx);
    std::string l = "(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) l += ",";
      l += factors[i]->elements[cs[i]];
    }
    l += ")";
    els[idx] = l;
  }
  auto b = std::make_shared<FiniteBiorder>();
  b->elements = std::move(els);
  b->leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x) {
    auto cx = product_split(factors, x);
    for (std::size_t y = 0; y < n; ++y) {
      auto cy = product_split(factors, y);
      bool le = true;
      for (std::size_t i = 0; i < factors.size(); ++i)
        if (!factors[i]->le(cx[i], cy[i])) { le = false; break; }
      b->leq[x][y] = le;
    }
  }
  // Componentwise coherence: group by the tuple of component class ids.
  std::map<std::vector<std::size_t>, std::size_t> key_to_class;
  b->class_of.assign(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    auto cx = product_split(factors, x);
    std::vector<std::size_t> key(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) key[i] = factors[i]->class_of[cx[i]];
    auto [it, fresh] = key_to_class.emplace(key, b->classes.size());
    if (fresh) b->classes.push_back({});
    b->classes[it->second].push_back(x);
    b->class_of[x] = it->second;
  }
  for (auto& cl : b->classes) std::sort(cl.begin(), cl.end());
  return b;
}

inline BiorderPtr product(const BiorderPtr& a, const BiorderPtr& b) {
  return product_many({a, b});
}

/// Tagged disjoint union, left summand first; cross-summand pairs are
/// unrelated and incoherent.
inline BiorderPtr coproduct(const BiorderPtr& a, const BiorderPtr& b) {
  const std::size_t na = a->size(), nb = b->size(), n = na + nb;
  std::vector<std::string> els;
  for (const auto& e : a->elements) els.push_back("inl:" + e);
  for (const auto& e : b->elements) els.push_back("inr:" + e);
  auto r = std::make_shared<FiniteBiorder>();
  r->elements = std::move(els);
  r->leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) r->leq[i][j] = a->le(i, j);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) r->leq[na + i][na + j] = b->le(i, j);
  for (const auto& cl : a->classes) r->classes.push_back(cl);
  for (const auto& cl : b->classes) {
    std::vector<std::size_t> shifted;
    for (std::size_t i : cl) shifted.push_back(na + i);
    r->classes.push_back(shifted);
  }
  r->class_of.assign(n, 0);
  for (std::size_t c = 0; c < r->classes.size(); ++c)
    for (std::size_t i : r->classes[c]) r->class_of[i] = c;
  return r;
}

/// Adds fresh bot below and top above everything; {bot,top} is a new class.
/// Carrier order: bot, then A's elements, then top.
inline BiorderPtr bilift(const BiorderPtr& a) {
  const std::size_t na = a->size(), n = na + 2;
  std::vector<std::string> els;
  els.push_back("bot");
  for (const auto& e : a->elements) els.push_back(e);
  els.push_back("top");
  auto r = std::make_shared<FiniteBiorder>();
  r->elements = std::move(els);
  r->leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t j = 0; j < n; ++j) r->leq[0][j] = true;
  for (std::size_t i = 0; i < n; ++i) r->leq[i][n - 1] = true;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) r->leq[1 + i][1 + j] = a->le(i, j);
  detail::close_reflexive_transitive(r->leq);
  r->classes.push_back({0, n - 1});
  for (const auto& cl : a->classes) {
    std::vector<std::size_t> shifted;
    for (std::size_t i : cl) shifted.push_back(1 + i);
    r->classes.push_back(shifted);
  }
  r->class_of.assign(n, 0);
  for (std::size_t c = 0; c < r->classes.size(); ++c)
    for (std::size_t i : r->classes[c]) r->class_of[i] = c;
  return r;
}

// ---------------------------------------------------------------------------
// Meets, joins, pointedness
// ---------------------------------------------------------------------------

inline Element meet(const BiorderPtr& b, std::size_t x, std::size_t y) {
  if (!b->coherent(x, y))
    fail("incoherent-pair",
         "meet of " + b->elements[x] + " and " + b->elements[y] + ": not coherent");
  auto m = detail::global_meet(*b, x, y);
  if (!m) fail("invalid-biorder", "coherent pair without a glb");
  return Element{b, *m};
}

inline Element join(const BiorderPtr& b, std::size_t x, std::size_t y) {
  if (!b->coherent(x, y))
    fail("incoherent-pair",
         "join of " + b->elements[x] + " and " + b->elements[y] + ": not coherent");
  auto j = detail::global_join(*b, x, y);
  if (!j) fail("invalid-biorder", "coherent pair without a lub");
  return Element{b, *j};
}

inline std::optional<std::size_t> least_element(const FiniteBiorder& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    bool least = true;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b.le(i, j)) { least = false; break; }
    if (least) return i;
  }
  return std::nullopt;
}

inline std::optional<std::size_t> greatest_element(const FiniteBiorder& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    bool greatest = true;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b.le(j, i)) { greatest = false; break; }
    if (greatest) return i;
  }
  return std::nullopt;
}

/// Pointed: least bot and greatest top exist and are coherent.
inline bool is_pointed(const FiniteBiorder& b) {
  auto lo = least_element(b);
  auto hi = greatest_element(b);
  return lo && hi && b.class_of[*lo] == b.class_of[*hi];
}

// ---------------------------------------------------------------------------
// The two presentations
// ---------------------------------------------------------------------------

/// <=B as the pair set <=E intersected with coherence.
inline std::vector<std::pair<std::size_t, std::size_t>> to_bistable_order(
    const FiniteBiorder& b) {
  std::vector<std::pair<std::size_t, std::size_t>> r;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b.le(i, j) && b.coherent(i, j)) r.emplace_back(i, j);
  return r;
}

/// Rebuilds a biorder from the (<=E, <=B) presentation, checking the three
/// defining conditions. Throws "not-a-bistable-order" naming the violated
/// condition.
inline BiorderPtr from_bistable_order(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::size_t, std::size_t>>& leqE_pairs,
    const std::vector<std::pair<std::size_t, std::size_t>>& leqB_pairs) {
  const std::size_t n = elements.size();
  std::vector<std::vector<bool>> leqE(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> leqB(n, std::vector<bool>(n, false));
  for (auto [i, j] : leqE_pairs) leqE[i][j] = true;
  for (auto [i, j] : leqB_pairs) leqB[i][j] = true;
  detail::close_reflexive_transitive(leqE);
  detail::close_reflexive_transitive(leqB);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leqE[i][j] && leqE[j][i])
        fail("not-a-bistable-order", "<=E is not antisymmetric");
      if (i != j && leqB[i][j] && leqB[j][i])
        fail("not-a-bistable-order", "<=B is not antisymmetric");
      if (leqB[i][j] && !leqE[i][j])
        fail("not-a-bistable-order", "<=B exceeds <=E at " + elements[i] + "," + elements[j]);
    }

  auto boundedAbove = [&](std::size_t a, std::size_t b2) {
    for (std::size_t c = 0; c < n; ++c)
      if (leqB[a][c] && leqB[b2][c]) return true;
    return false;
  };
  auto boundedBelow = [&](std::size_t a, std::size_t b2) {
    for (std::size_t c = 0; c < n; ++c)
      if (leqB[c][a] && leqB[c][b2]) return true;
    return false;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b2 = 0; b2 < n; ++b2)
      if (boundedAbove(a, b2) != boundedBelow(a, b2))
        fail("not-a-bistable-order",
             "bounded-above/bounded-below mismatch at " + elements[a] + "," + elements[b2]);

  // glb/lub in both orders for <=B-bounded pairs.
  auto meet_in = [&](const std::vector<std::vector<bool>>& ord, std::size_t a, std::size_t b2)
      -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c)
      if (ord[c][a] && ord[c][b2]) {
        bool greatest = true;
        for (std::size_t d = 0; d < n; ++d)
          if (ord[d][a] && ord[d][b2] && !ord[d][c]) { greatest = false; break; }
        if (greatest) { best = c; break; }
      }
    return best;
  };
  auto join_in = [&](const std::vector<std::vector<bool>>& ord, std::size_t a, std::size_t b2)
      -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c)
      if (ord[a][c] && ord[b2][c]) {
        bool least = true;
        for (std::size_t d = 0; d < n; ++d)
          if (ord[a][d] && ord[b2][d] && !ord[c][d]) { least = false; break; }
        if (least) { best = c; break; }
      }
    return best;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b2 = 0; b2 < n; ++b2)
      if (boundedAbove(a, b2)) {
        auto mE = meet_in(leqE, a, b2), mB = meet_in(leqB, a, b2);
        auto jE = join_in(leqE, a, b2), jB = join_in(leqB, a, b2);
        if (!mE || !mB || *mE != *mB)
          fail("not-a-bistable-order",
               "no common glb for " + elements[a] + "," + elements[b2]);
        if (!jE || !jB || *jE != *jB)
          fail("not-a-bistable-order",
               "no common lub for " + elements[a] + "," + elements[b2]);
      }

  // Coherence classes: equivalence closure of "bounded above in <=B".
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b2 = 0; b2 < n; ++b2)
      if (boundedAbove(a, b2)) parent[find(a)] = find(b2);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> classes;
  for (auto& [root, members] : groups) classes.push_back(members);
  std::sort(classes.begin(), classes.end());

  std::vector<std::pair<std::size_t, std::size_t>> leqE_all;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (leqE[i][j]) leqE_all.emplace_back(i, j);
  auto result = make_biorder(std::move(elements), leqE_all, classes);

  auto diags = validate(*result);
  if (!diags.empty())
    fail("not-a-bistable-order", "distributivity/lattice condition fails: " + diags[0].message);

  // Round-trip consistency: <=B must be exactly <=E restricted to classes.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((result->le(i, j) && result->coherent(i, j)) != static_cast<bool>(leqB[i][j]))
        fail("not-a-bistable-order",
             "<=B does not agree with <=E restricted to coherence classes");
  return result;
}

// ---------------------------------------------------------------------------
// Isomorphism (order + coherence preserving bijection), for small carriers.
// ---------------------------------------------------------------------------

inline bool is_isomorphic(const FiniteBiorder& a, const FiniteBiorder& b) {
  const std::size_t n = a.size();
  if (n != b.size() || a.classes.size() != b.classes.size()) return false;
  std::vector<std::size_t> perm(n, SIZE_MAX);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        if (a.le(i, k) != b.le(j, perm[k])) ok = false;
        if (a.le(k, i) != b.le(perm[k], j)) ok = false;
        if (a.coherent(i, k) != b.coherent(j, perm[k])) ok = false;
      }
      if (!ok) continue;
      perm[i] = j;
      used[j] = true;
      if (go(i + 1)) return true;
      used[j] = false;
      perm[i] = SIZE_MAX;
    }
    return false;
  };
  return go(0);
}

}  // namespace bistable
