#pragma once

// The Sigma-calculus side: definability machinery for the finite biorder
// model. Every type embeds into a first-order type Sigma^n => Sigma^m by a
// pair of closed terms whose denotations compose to the identity; elements
// of first-order types are definable by inspection (constant or projection
// per component); putting the two together defines every element at every
// type.
//
// First-order types are Arrow(Prod(n sigmas), out(m)) where out(1) is bare
// Sigma and out(m) is an m-ary product otherwise. Exponent bookkeeping:
//   n(S) = 0, m(S) = 1
//   n(Prod Ts) = max n(Ti), m = sum m(Ti)
//   n(S => T): special cases for m(T) = 0, m(S) = 0, n(S) = 0, otherwise
//   n = n(T)+n(S)+m(S) and m = (2 n(S))^{m(S)} * m(T).
// All retraction terms are closed; composition therefore never captures.

#include <cstdint>
#include <string>
#include <vector>

#include "bistable/denote.hpp"
#include "bistable/term.hpp"

namespace bistable {

inline TypePtr out_type(std::size_t m) { return m == 1 ? t_sigma() : t_sigma_pow(m); }
inline TypePtr fo_type(std::size_t n, std::size_t m) {
  return t_arrow(t_sigma_pow(n), out_type(m));
}

namespace fodetail {

/// Components of a value of out_type(m).
inline std::vector<TermPtr> out_comps(const TermPtr& e, std::size_t m) {
  std::vector<TermPtr> r;
  if (m == 1) { r.push_back(e); return r; }
  for (std::size_t j = 1; j <= m; ++j) r.push_back(proj(j, e));
  return r;
}

inline TermPtr mk_out(std::vector<TermPtr> comps) {
  if (comps.size() == 1) return comps[0];
  return tuple(std::move(comps));
}

/// (pi from1 x) .. (pi to1 x) as a Sigma^len tuple.
inline TermPtr tuple_slice(const TermPtr& x, std::size_t from1, std::size_t to1) {
  std::vector<TermPtr> items;
  for (std::size_t i = from1; i <= to1; ++i) items.push_back(proj(i, x));
  return tuple(std::move(items));
}

/// Components of x (a Sigma^n tuple) padded with bot up to width.
inline TermPtr tuple_pad(const TermPtr& x, std::size_t n, std::size_t width) {
  std::vector<TermPtr> items;
  for (std::size_t i = 1; i <= n; ++i) items.push_back(proj(i, x));
  for (std::size_t i = n; i < width; ++i) items.push_back(bot());
  return tuple(std::move(items));
}

inline TermPtr tuple_concat(const TermPtr& x, std::size_t nx, const TermPtr& y, std::size_t ny) {
  std::vector<TermPtr> items;
  for (std::size_t i = 1; i <= nx; ++i) items.push_back(proj(i, x));
  for (std::size_t i = 1; i <= ny; ++i) items.push_back(proj(i, y));
  return tuple(std::move(items));
}

}  // namespace fodetail

// ---------------------------------------------------------------------------
// Retractions as closed term pairs
// ---------------------------------------------------------------------------

struct Retraction {
  TypePtr from, to;
  TermPtr inj;   // from => to
  TermPtr proj;  // to => from
};

inline Retraction ret_identity(const TypePtr& t) {
  return {t, t, lam("x", t, var("x")), lam("x", t, var("x"))};
}

inline Retraction ret_compose(const Retraction& a, const Retraction& b) {
  if (!type_equal(a.to, b.from)) fail("internal", "ret_compose: middle types differ");
  return {a.from, b.to,
          lam("x", a.from, app(b.inj, app(a.inj, var("x")))),
          lam("x", b.to, app(a.proj, app(b.proj, var("x"))))};
}

/// (D1 => C1) embeds in (D2 => C2) given D1 < D2 and C1 < C2.
inline Retraction ret_arrow(const Retraction& rd, const Retraction& rc) {
  TypePtr from = t_arrow(rd.from, rc.from);
  TypePtr to = t_arrow(rd.to, rc.to);
  return {from, to,
          lam("f", from, lam("x", rd.to, app(rc.inj, app(var("f"), app(rd.proj, var("x")))))),
          lam("f", to, lam("x", rd.from, app(rc.proj, app(var("f"), app(rd.inj, var("x"))))))};
}

inline Retraction ret_prod(const std::vector<Retraction>& rs) {
  std::vector<TypePtr> froms, tos;
  for (const auto& r : rs) { froms.push_back(r.from); tos.push_back(r.to); }
  TypePtr from = t_prod(froms), to = t_prod(tos);
  std::vector<TermPtr> injs, projs;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    injs.push_back(app(rs[i].inj, proj(i + 1, var("p"))));
    projs.push_back(app(rs[i].proj, proj(i + 1, var("p"))));
  }
  return {from, to, lam("p", from, tuple(injs)), lam("p", to, tuple(projs))};
}

namespace fodetail {

/// Sigma < Sigma^0 => Sigma.
inline Retraction base_sigma() {
  TypePtr to = fo_type(0, 1);
  return {t_sigma(), to,
          lam("s", t_sigma(), lam("u", t_sigma_pow(0), var("s"))),
          lam("f", to, app(var("f"), tuple({})))};
}

/// Arrow(A, Arrow(B, C)) iso Arrow(B, Arrow(A, C)).
inline Retraction iso_swap(const TypePtr& a, const TypePtr& b, const TypePtr& c) {
  TypePtr from = t_arrow(a, t_arrow(b, c));
  TypePtr to = t_arrow(b, t_arrow(a, c));
  return {from, to,
          lam("f", from, lam("y", b, lam("x", a, app(app(var("f"), var("x")), var("y"))))),
          lam("f", to, lam("x", a, lam("y", b, app(app(var("f"), var("y")), var("x")))))};
}

/// Arrow(X, Prod(As)) iso Prod(Arrow(X, Ai)).
inline Retraction iso_distribute(const TypePtr& x, const std::vector<TypePtr>& as) {
  std::vector<TypePtr> comps;
  for (const auto& a : as) comps.push_back(t_arrow(x, a));
  TypePtr from = t_arrow(x, t_prod(as));
  TypePtr to = t_prod(comps);
  std::vector<TermPtr> injs, projs;
  for (std::size_t i = 0; i < as.size(); ++i) {
    injs.push_back(lam("z", x, proj(i + 1, app(var("F"), var("z")))));
    projs.push_back(app(proj(i + 1, var("p")), var("z")));
  }
  return {from, to,
          lam("F", from, tuple(injs)),
          lam("p", to, lam("z", x, tuple(projs)))};
}

/// Arrow(Sigma, FO(n, m)) iso FO(n+1, m); the Sigma argument becomes the
/// first product component.
inline Retraction iso_uncurry_sigma_front(std::size_t n, std::size_t m) {
  TypePtr from = t_arrow(t_sigma(), fo_type(n, m));
  TypePtr to = fo_type(n + 1, m);
  TermPtr inj =
      lam("F", from,
          lam("x", t_sigma_pow(n + 1),
              app(app(var("F"), proj(1, var("x"))), tuple_slice(var("x"), 2, n + 1))));
  TermPtr pr =
      lam("G", to,
          lam("s", t_sigma(),
              lam("y", t_sigma_pow(n),
                  app(var("G"), tuple_concat(tuple({var("s")}), 1, var("y"), n)))));
  return {from, to, inj, pr};
}

/// Arrow(Prod(a), Arrow(Prod(b), out(m))) iso FO(a+b, m).
inline Retraction iso_uncurry_prod_front(std::size_t a, std::size_t b, std::size_t m) {
  TypePtr from = t_arrow(t_sigma_pow(a), fo_type(b, m));
  TypePtr to = fo_type(a + b, m);
  TermPtr inj =
      lam("F", from,
          lam("x", t_sigma_pow(a + b),
              app(app(var("F"), tuple_slice(var("x"), 1, a)),
                  tuple_slice(var("x"), a + 1, a + b))));
  TermPtr pr =
      lam("G", to,
          lam("y", t_sigma_pow(a),
              lam("z", t_sigma_pow(b), app(var("G"), tuple_concat(var("y"), a, var("z"), b)))));
  return {from, to, inj, pr};
}

/// Arrow(Prod0, out(m)) iso out(m): unapply at the empty tuple.
inline Retraction iso_unarrow_unit(std::size_t m) {
  TypePtr from = t_arrow(t_sigma_pow(0), out_type(m));
  TypePtr to = out_type(m);
  return {from, to,
          lam("f", from, app(var("f"), tuple({}))),
          lam("v", to, lam("u", t_sigma_pow(0), var("v")))};
}

/// Prod of Arrow(Prod(a), out(mi)) < Arrow(Prod(a), out(sum mi)) by output
/// concatenation.
inline Retraction merge_equal_dom(std::size_t a, const std::vector<std::size_t>& ms) {
  std::vector<TypePtr> comps;
  std::size_t total = 0;
  for (std::size_t mi : ms) { comps.push_back(fo_type(a, mi)); total += mi; }
  TypePtr from = t_prod(comps);
  TypePtr to = fo_type(a, total);
  std::vector<TermPtr> outs;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    TermPtr applied = app(proj(i + 1, var("p")), var("x"));
    for (auto& c : out_comps(applied, ms[i])) outs.push_back(c);
  }
  TermPtr inj = lam("p", from, lam("x", t_sigma_pow(a), mk_out(outs)));
  std::vector<TermPtr> projs;
  std::size_t off = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::vector<TermPtr> mine;
    TermPtr applied = app(var("G"), var("x"));
    auto all = out_comps(applied, total);
    for (std::size_t j = 0; j < ms[i]; ++j) mine.push_back(all[off + j]);
    projs.push_back(lam("x", t_sigma_pow(a), mk_out(mine)));
    off += ms[i];
  }
  TermPtr pr = lam("G", to, tuple(projs));
  return {from, to, inj, pr};
}

/// FO(a, m1) < FO(a, m2) for m1 <= m2, padding outputs with bot.
inline Retraction cod_pad(std::size_t a, std::size_t m1, std::size_t m2) {
  if (m1 == m2) return ret_identity(fo_type(a, m1));
  TypePtr from = fo_type(a, m1), to = fo_type(a, m2);
  std::vector<TermPtr> outs = out_comps(app(var("F"), var("x")), m1);
  for (std::size_t i = m1; i < m2; ++i) outs.push_back(bot());
  TermPtr inj = lam("F", from, lam("x", t_sigma_pow(a), mk_out(outs)));
  std::vector<TermPtr> keep;
  auto all = out_comps(app(var("G"), var("x")), m2);
  for (std::size_t j = 0; j < m1; ++j) keep.push_back(all[j]);
  TermPtr pr = lam("G", to, lam("x", t_sigma_pow(a), mk_out(keep)));
  return {from, to, inj, pr};
}

/// FO(n1, m) < FO(n2, m) for n1 <= n2, ignoring the extra arguments.
inline Retraction dom_pad(std::size_t n1, std::size_t n2, std::size_t m) {
  if (n1 == n2) return ret_identity(fo_type(n1, m));
  TypePtr from = fo_type(n1, m), to = fo_type(n2, m);
  TermPtr inj = lam("F", from, lam("x", t_sigma_pow(n2),
                                   app(var("F"), tuple_slice(var("x"), 1, n1))));
  TermPtr pr = lam("G", to, lam("y", t_sigma_pow(n1), app(var("G"), tuple_pad(var("y"), n1, n2))));
  return {from, to, inj, pr};
}

/// The key first-order reduction: ((Sigma^n => Sigma) => Sigma) embeds in
/// the flat product (Sigma => Sigma) x Sigma^n. The composite
/// proj(inj(f)) = \g. f (\y. g <f pi_1, ..., f pi_n>), which denotes the
/// identity (the theory's defining equation at each n).
inline Retraction ret1_flat(std::size_t n) {
  TypePtr fo_n1 = fo_type(n, 1);               // Sigma^n => Sigma
  TypePtr from = t_arrow(fo_n1, t_sigma());    // (Sigma^n => Sigma) => Sigma
  std::vector<TypePtr> comps{t_arrow(t_sigma(), t_sigma())};
  for (std::size_t i = 0; i < n; ++i) comps.push_back(t_sigma());
  TypePtr to = t_prod(comps);
  std::vector<TermPtr> items;
  items.push_back(lam("s", t_sigma(), app(var("f"), lam("y", t_sigma_pow(n), var("s")))));
  for (std::size_t i = 1; i <= n; ++i)
    items.push_back(app(var("f"), lam("y", t_sigma_pow(n), proj(i, var("y")))));
  TermPtr inj = lam("f", from, tuple(items));
  std::vector<TermPtr> args;
  for (std::size_t i = 2; i <= n + 1; ++i) args.push_back(proj(i, var("p")));
  TermPtr pr = lam("p", to,
                   lam("g", fo_n1, app(proj(1, var("p")), app(var("g"), tuple(args)))));
  return {from, to, inj, pr};
}

inline std::size_t pow_sz(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

/// Arrow(FO(n, m), Sigma) < FO(n+m, (2n)^m) for n, m >= 1, by induction
/// on m.
inline Retraction ret3core(std::size_t n, std::size_t m) {
  if (m == 1) {
    Retraction r1 = ret1_flat(n);
    // components of the flat product embed into FO(n+1, 1)
    std::vector<Retraction> comp_rets;
    {
      // Sigma => Sigma < Sigma^{n+1} => Sigma (use the first argument)
      TypePtr from = t_arrow(t_sigma(), t_sigma());
      TypePtr to = fo_type(n + 1, 1);
      TermPtr inj = lam("f", from, lam("x", t_sigma_pow(n + 1), app(var("f"), proj(1, var("x")))));
      TermPtr pr = lam("g", to, lam("s", t_sigma(), app(var("g"), tuple_pad(tuple({var("s")}), 1, n + 1))));
      comp_rets.push_back({from, to, inj, pr});
    }
    for (std::size_t i = 0; i < n; ++i) {
      // Sigma < Sigma^{n+1} => Sigma (constant)
      TypePtr to = fo_type(n + 1, 1);
      TermPtr inj = lam("s", t_sigma(), lam("x", t_sigma_pow(n + 1), var("s")));
      TermPtr pr = lam("g", to, app(var("g"), tuple_pad(tuple({}), 0, n + 1)));
      comp_rets.push_back({t_sigma(), to, inj, pr});
    }
    Retraction r2 = ret_prod(comp_rets);
    Retraction r3 = merge_equal_dom(n + 1, std::vector<std::size_t>(n + 1, 1));
    Retraction r4 = cod_pad(n + 1, n + 1, 2 * n);
    return ret_compose(ret_compose(ret_compose(r1, r2), r3), r4);
  }
  // m >= 2: split the last output, reduce via ret1_flat, recurse.
  const std::size_t mm = m - 1;
  TypePtr X = fo_type(n, mm);
  TypePtr K_nm = t_arrow(fo_type(n, m), t_sigma());
  TypePtr K_n1 = t_arrow(fo_type(n, 1), t_sigma());
  // c1: Arrow(FO(n,m), Sigma) iso Arrow(X, Arrow(FO(n,1), Sigma))
  Retraction c1;
  {
    TypePtr from = K_nm;
    TypePtr to = t_arrow(X, K_n1);
    std::vector<TermPtr> outs = out_comps(app(var("g"), var("x")), mm);
    outs.push_back(app(var("h"), var("x")));
    TermPtr inj =
        lam("F", from,
            lam("g", X,
                lam("h", fo_type(n, 1),
                    app(var("F"), lam("x", t_sigma_pow(n), mk_out(outs))))));
    auto all = out_comps(app(var("f"), var("x")), m);
    std::vector<TermPtr> firsts(all.begin(), all.end() - 1);
    TermPtr pr =
        lam("G", to,
            lam("f", fo_type(n, m),
                app(app(var("G"), lam("x", t_sigma_pow(n), mk_out(firsts))),
                    lam("x", t_sigma_pow(n), all.back()))));
    c1 = {from, to, inj, pr};
  }
  // c2: codomain congruence with ret1_flat(n)
  Retraction r1f = ret1_flat(n);
  Retraction c2 = ret_arrow(ret_identity(X), r1f);
  // c3: distribute over the flat product components
  std::vector<TypePtr> pcomps{t_arrow(t_sigma(), t_sigma())};
  for (std::size_t i = 0; i < n; ++i) pcomps.push_back(t_sigma());
  Retraction c3 = iso_distribute(X, pcomps);
  // c4/c5: per-component reductions into FO(n+m, (2n)^{m-1})
  const std::size_t b = pow_sz(2 * n, mm);
  Retraction ih = ret3core(n, mm);  // Arrow(X, Sigma) < FO(n+mm, b)
  std::vector<Retraction> comp_rets;
  {
    // Arrow(X, Sigma=>Sigma) iso Arrow(Sigma, Arrow(X, Sigma)) < FO(n+m, b)
    Retraction s = iso_swap(X, t_sigma(), t_sigma());
    Retraction lift = ret_arrow(ret_identity(t_sigma()), ih);
    Retraction unc = iso_uncurry_sigma_front(n + mm, b);
    comp_rets.push_back(ret_compose(ret_compose(s, lift), unc));
  }
  for (std::size_t i = 0; i < n; ++i)
    comp_rets.push_back(ret_compose(ih, dom_pad(n + mm, n + m, b)));
  Retraction c4 = ret_prod(comp_rets);
  // c6: merge and pad up to (2n)^m
  Retraction c5 = merge_equal_dom(n + m, std::vector<std::size_t>(n + 1, b));
  Retraction c6 = cod_pad(n + m, (n + 1) * b, 2 * n * b);
  return ret_compose(
      ret_compose(ret_compose(ret_compose(ret_compose(c1, c2), c3), c4), c5), c6);
}

/// A closed term of any type whose m-exponent is zero (a one-point type).
inline TermPtr point_term(const TypePtr& t);

}  // namespace fodetail

struct RetractionPair {
  TypePtr type;    // T
  TypePtr target;  // Sigma^n => out(m)
  std::size_t n = 0, m = 0;
  TermPtr inj;   // T => target
  TermPtr proj;  // target => T
};

inline RetractionPair retraction_terms(const TypePtr& t);

namespace fodetail {

inline TermPtr point_term(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Prod: {
      std::vector<TermPtr> items;
      for (const auto& i : t->items) items.push_back(point_term(i));
      return tuple(std::move(items));
    }
    case Type::Kind::Arrow:
      return lam("x", t->from, point_term(t->to));
    default:
      fail("internal", "point_term: type is not one-point");
  }
}

}  // namespace fodetail

inline RetractionPair retraction_terms(const TypePtr& t) {
  using namespace fodetail;
  switch (t->kind) {
    case Type::Kind::Nat:
      fail("type-error", "retraction_terms is for Sigma-calculus types (no nat)");
    case Type::Kind::Sigma: {
      Retraction r = base_sigma();
      return {t, r.to, 0, 1, r.inj, r.proj};
    }
    case Type::Kind::Prod: {
      std::vector<RetractionPair> rs;
      std::size_t maxN = 0, sumM = 0;
      for (const auto& i : t->items) {
        rs.push_back(retraction_terms(i));
        maxN = std::max(maxN, rs.back().n);
        sumM += rs.back().m;
      }
      // componentwise congruence, then combine with padding
      std::vector<Retraction> comp;
      for (const auto& r : rs) comp.push_back({r.type, r.target, r.inj, r.proj});
      Retraction cong = ret_prod(comp);
      // Prod(FO(ni, mi)) < FO(maxN, sum mi)
      TypePtr from = cong.to;
      TypePtr to = fo_type(maxN, sumM);
      std::vector<TermPtr> outs;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        TermPtr applied =
            app(proj(i + 1, var("p")), tuple_slice(var("x"), 1, rs[i].n));
        for (auto& c : out_comps(applied, rs[i].m)) outs.push_back(c);
      }
      TermPtr inj = lam("p", from, lam("x", t_sigma_pow(maxN),
                                       sumM == 0 ? tuple({}) : mk_out(outs)));
      std::vector<TermPtr> projs;
      std::size_t off = 0;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        TermPtr applied = app(var("G"), tuple_pad(var("y"), rs[i].n, maxN));
        auto all = out_comps(applied, sumM);
        std::vector<TermPtr> mine;
        for (std::size_t j = 0; j < rs[i].m; ++j) mine.push_back(all[off + j]);
        projs.push_back(lam("y", t_sigma_pow(rs[i].n),
                            rs[i].m == 0 ? tuple({}) : mk_out(mine)));
        off += rs[i].m;
      }
      TermPtr pr = lam("G", to, tuple(projs));
      Retraction pack{from, to, inj, pr};
      Retraction whole = ret_compose(cong, pack);
      return {t, to, maxN, sumM, whole.inj, whole.proj};
    }
    case Type::Kind::Arrow: {
      RetractionPair rS = retraction_terms(t->from);
      RetractionPair rT = retraction_terms(t->to);
      Retraction cS{rS.type, rS.target, rS.inj, rS.proj};
      Retraction cT{rT.type, rT.target, rT.inj, rT.proj};
      if (rT.m == 0) {
        // T denotes a point
        TypePtr to = fo_type(0, 0);
        TermPtr inj = lam("f", t, lam("u", t_sigma_pow(0), tuple({})));
        TermPtr pr = lam("g", to, point_term(t));
        return {t, to, 0, 0, inj, pr};
      }
      Retraction cong = ret_arrow(cS, cT);
      if (rS.m == 0) {
        // the argument type denotes a point: drop it
        TypePtr X = cong.to;  // Arrow(FO(0,0)-like, FO(nT,mT))
        TypePtr Z = rT.target;
        TermPtr inj = lam("f", X, app(var("f"), point_term(rS.target)));
        TermPtr pr = lam("z", Z, lam("q", rS.target, var("z")));
        Retraction drop{X, Z, inj, pr};
        Retraction whole = ret_compose(cong, drop);
        return {t, Z, rT.n, rT.m, whole.inj, whole.proj};
      }
      if (rS.n == 0) {
        // FO(0, mS) iso out(mS); then uncurry the product in front
        Retraction unit_iso = iso_unarrow_unit(rS.m);
        Retraction dom_swap = ret_arrow(unit_iso, ret_identity(rT.target));
        Retraction chain = ret_compose(cong, dom_swap);
        Retraction unc =
            rS.m == 1
                ? iso_uncurry_sigma_front(rT.n, rT.m)
                : iso_uncurry_prod_front(rS.m, rT.n, rT.m);
        Retraction whole = ret_compose(chain, unc);
        std::size_t n = rS.m + rT.n;
        return {t, whole.to, n, rT.m, whole.inj, whole.proj};
      }
      // main case: nS, mS, mT >= 1
      const std::size_t a = rS.n + rS.m;
      const std::size_t bexp = pow_sz(2 * rS.n, rS.m);
      TypePtr F = rS.target;
      // G = Arrow(F, FO(nT, mT)) iso Arrow(Prod nT, Arrow(F, out mT))
      Retraction swap = iso_swap(F, t_sigma_pow(rT.n), out_type(rT.m));
      // inner: Arrow(F, out(mT)) < FO(a, bexp * mT)
      Retraction inner;
      if (rT.m == 1) {
        inner = ret3core(rS.n, rS.m);
      } else {
        std::vector<TypePtr> sigmas(rT.m, t_sigma());
        Retraction dist = iso_distribute(F, sigmas);
        std::vector<Retraction> each(rT.m, ret3core(rS.n, rS.m));
        Retraction mapped = ret_prod(each);
        Retraction merged = merge_equal_dom(a, std::vector<std::size_t>(rT.m, bexp));
        inner = ret_compose(ret_compose(dist, mapped), merged);
      }
      Retraction lift = ret_arrow(ret_identity(t_sigma_pow(rT.n)), inner);
      Retraction unc = iso_uncurry_prod_front(rT.n, a, bexp * rT.m);
      Retraction whole =
          ret_compose(ret_compose(ret_compose(cong, swap), lift), unc);
      return {t, whole.to, rT.n + a, bexp * rT.m, whole.inj, whole.proj};
    }
  }
  fail("internal", "retraction_terms");
}

// ---------------------------------------------------------------------------
// First-order definability
// ---------------------------------------------------------------------------

/// Defines an element of Sigma^n => out(m) given as a table over the
/// 2^n-point product. Each output component of a monotone bistable
/// first-order function is a constant or a projection; anything else is a
/// library bug.
inline TermPtr fo_define(const BiFunction& f, std::size_t n, std::size_t m) {
  const std::size_t dom_size = f.dom->size();
  if (dom_size != (std::size_t(1) << n)) fail("internal", "fo_define: domain size mismatch");
  std::vector<BiorderPtr> sigmas(n, sigma());
  auto comp_of = [&](std::size_t x, std::size_t j) -> std::size_t {
    // j-th (0-based) Sigma component of the codomain value f(x)
    if (m == 1) return f(x);
    auto comps = product_split(std::vector<BiorderPtr>(m, sigma()), f(x));
    return comps[j];
  };
  auto body_for = [&](std::size_t j) -> TermPtr {
    std::size_t all_bot = product_index(sigmas, std::vector<std::size_t>(n, 0));
    std::size_t all_top = product_index(sigmas, std::vector<std::size_t>(n, 1));
    if (comp_of(all_bot, j) == 1) return top();
    if (comp_of(all_top, j) == 0) return bot();
    std::size_t found = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      std::vector<std::size_t> probe(n, 0);
      probe[i - 1] = 1;
      if (comp_of(product_index(sigmas, probe), j) == 1) {
        if (found) fail("internal", "fo_define: two strictness indices");
        found = i;
      }
    }
    if (!found) fail("internal", "fo_define: strict component with no index");
    return proj(found, var("x"));
  };
  if (m == 0) return lam("x", t_sigma_pow(n), tuple({}));
  if (m == 1) return lam("x", t_sigma_pow(n), body_for(0));
  std::vector<TermPtr> items;
  for (std::size_t j = 0; j < m; ++j) items.push_back(body_for(j));
  return lam("x", t_sigma_pow(n), tuple(std::move(items)));
}

/// fo_define from an element of a denoted first-order type.
inline TermPtr fo_define(const DenoteCtx& ctx, const Element& e, std::size_t n, std::size_t m) {
  const TypeDen& d = ctx.den(fo_type(n, m));
  return fo_define(d.expo->functions[e.index], n, m);
}

// ---------------------------------------------------------------------------
// Universality
// ---------------------------------------------------------------------------

/// Synthesizes a closed term denoting e at type T: push e through the
/// injection into the first-order target, read off the first-order term,
/// and project back.
inline TermPtr define_element(const DenoteCtx& ctx, const Element& e, const TypePtr& t) {
  RetractionPair r = retraction_terms(t);
  if (r.n >= 63 || (std::uint64_t(1) << r.n) > ctx.budget() ||
      (r.m >= 63 || (std::uint64_t(1) << r.m) > ctx.budget()))
    fail("enumeration-budget-exceeded",
         "first-order target Sigma^" + std::to_string(r.n) + " => Sigma^" + std::to_string(r.m) +
             " is beyond the budget");
  // d := [[inj]](e), tabulated at the first-order target
  EvalState st{&ctx, 1};
  SemV inj_v = detail::eval_sem(st, elaborate({}, r.inj).term, nullptr);
  SemV e_v = reflect(ctx, e.index, t);
  SemV d_v = sem_apply(inj_v, e_v);
  TypePtr dom_t = t_sigma_pow(r.n);
  TypePtr cod_t = out_type(r.m);
  const TypeDen& dd = ctx.den(dom_t);
  BiFunction table{dd.bi, ctx.den(cod_t).bi, std::vector<std::size_t>(dd.bi->size())};
  for (std::size_t x = 0; x < dd.bi->size(); ++x) {
    auto rr = reify(ctx, sem_apply(d_v, reflect(ctx, x, dom_t)), cod_t);
    if (!rr) fail("internal", "define_element: retraction term produced an approximation");
    table.table[x] = *rr;
  }
  TermPtr fo_term = fo_define(table, r.n, r.m);
  return app(r.proj, fo_term);
}

/// Checks the defining equation of the theory at arity n: the canonical
/// term \f.\h. f (\x. h <f pi_1, ..., f pi_n>) denotes the identity on
/// (Sigma^n => Sigma) => Sigma.
inline bool axiom_check(const DenoteCtx& ctx, std::size_t n) {
  TypePtr fo_n1 = fo_type(n, 1);
  TypePtr X = t_arrow(fo_n1, t_sigma());
  std::vector<TermPtr> args;
  for (std::size_t i = 1; i <= n; ++i)
    args.push_back(app(var("f"), lam("y", t_sigma_pow(n), proj(i, var("y")))));
  TermPtr g =
      lam("f", X,
          lam("h", fo_n1,
              app(var("f"), lam("x", t_sigma_pow(n), app(var("h"), tuple(args))))));
  BiFunction gf = denote_bifun(ctx, g);
  return gf == identity(ctx.den(X).bi);
}

/// Typechecking restricted to the Sigma fragment.
inline TypePtr lambda_typecheck(const TypeEnv& env, const TermPtr& t) {
  if (!is_sigma_only_term(t))
    fail("type-error", "term uses constructs outside the Sigma calculus");
  for (const auto& [k, v] : env)
    if (!is_sigma_only(v)) fail("type-error", "environment type outside the Sigma calculus");
  return typecheck(env, t);
}

}  // namespace bistable
