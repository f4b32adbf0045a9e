#pragma once

// Sequential data structures as games: explicit finite play sets over
// polarized moves, strategies as even-prefix-closed even-branching play
// sets (odd-length plays are error answers), the extensional order and
// bistable coherence on strategies, the affine arrow, promotion, the
// function-space game, application, realized functions, traces, and
// sequentialization.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bistable/bifun.hpp"
#include "bistable/biorder.hpp"
#include "bistable/error.hpp"

namespace bistable {

using Play = std::vector<std::size_t>;  // move indices
using PlaySet = std::set<Play>;

enum class Polarity { O, P };

struct Game {
  std::vector<std::string> move_ids;
  std::vector<Polarity> polarity;
  std::vector<Play> plays;  // includes the empty play; sorted, prefix-closed
  PlaySet play_set;         // same contents, for membership

  std::size_t moves() const { return move_ids.size(); }
};
using GamePtr = std::shared_ptr<const Game>;

inline GamePtr finish_game(std::vector<std::string> ids, std::vector<Polarity> pol,
                           PlaySet plays) {
  auto g = std::make_shared<Game>();
  g->move_ids = std::move(ids);
  g->polarity = std::move(pol);
  plays.insert(Play{});
  g->play_set = plays;
  g->plays.assign(plays.begin(), plays.end());
  std::sort(g->plays.begin(), g->plays.end(), [](const Play& a, const Play& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return g;
}

/// The empty game and the one-Opponent-move game.
inline GamePtr empty_game() { return finish_game({}, {}, {}); }
inline GamePtr one_move_game(const std::string& id = "o") {
  return finish_game({id}, {Polarity::O}, {Play{}, Play{0}});
}
/// A two-move question/answer game: O-move then P-move.
inline GamePtr qa_game(const std::string& q = "q", const std::string& a = "a") {
  return finish_game({q, a}, {Polarity::O, Polarity::P}, {Play{}, Play{0}, Play{0, 1}});
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline std::string show_play(const Game& g, const Play& p) {
  if (p.empty()) return "eps";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ".";
    s += g.move_ids[p[i]];
  }
  return s;
}

/// Membership conditions for the ambient move-sequence set: alternating
/// starting with Opponent, at most one occurrence of each move.
inline std::vector<Diagnostic> check_sequence(const Game& g, const Play& p) {
  std::vector<Diagnostic> out;
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= g.moves()) {
      out.push_back({"unknown-move", "position " + std::to_string(i)});
      continue;
    }
    if (!seen.insert(p[i]).second)
      out.push_back({"repeated-move", g.move_ids[p[i]] + " occurs twice"});
    Polarity want = (i % 2 == 0) ? Polarity::O : Polarity::P;
    if (g.polarity[p[i]] != want)
      out.push_back({"not-alternating",
                     "position " + std::to_string(i) + " (" + g.move_ids[p[i]] + ")"});
  }
  return out;
}

inline std::vector<Diagnostic> validate_game(const Game& g) {
  std::vector<Diagnostic> out;
  if (!g.play_set.count(Play{})) out.push_back({"no-empty-play", "missing the empty play"});
  for (const auto& p : g.play_set) {
    auto seq = check_sequence(g, p);
    out.insert(out.end(), seq.begin(), seq.end());
    if (!p.empty()) {
      Play pre(p.begin(), p.end() - 1);
      if (!g.play_set.count(pre))
        out.push_back({"not-prefix-closed", show_play(g, p) + " without its prefix"});
    }
  }
  return out;
}

inline std::vector<Diagnostic> legal_play(const Game& g, const Play& p) {
  std::vector<Diagnostic> out = check_sequence(g, p);
  if (!g.play_set.count(p)) out.push_back({"not-a-play", show_play(g, p)});
  return out;
}

struct Strategy {
  GamePtr game;
  PlaySet plays;

  bool operator==(const Strategy& o) const { return plays == o.plays; }
  bool operator<(const Strategy& o) const { return plays < o.plays; }
};

/// Even-length members (a strategy again).
inline PlaySet even_part(const PlaySet& s) {
  PlaySet r;
  for (const auto& p : s)
    if (p.size() % 2 == 0) r.insert(p);
  return r;
}

inline bool even_prefix_of(const Play& s, const Play& t) {
  // s is an even-length prefix of t, or s = t
  if (s == t) return true;
  if (s.size() % 2 != 0 || s.size() > t.size()) return false;
  return std::equal(s.begin(), s.end(), t.begin());
}

inline std::vector<Diagnostic> validate_strategy(const Strategy& s) {
  std::vector<Diagnostic> out;
  const Game& g = *s.game;
  if (s.plays.empty() || !s.plays.count(Play{}))
    out.push_back({"missing-empty-play", "strategies contain the empty play"});
  for (const auto& p : s.plays)
    if (!g.play_set.count(p)) out.push_back({"not-a-play", show_play(g, p)});
  for (const auto& p : s.plays) {
    // even-prefix closure: every proper even-length prefix is present
    for (std::size_t k = 2; k < p.size(); k += 2) {
      Play pre(p.begin(), p.begin() + k);
      if (!s.plays.count(pre))
        out.push_back({"not-even-prefix-closed",
                       show_play(g, p) + " without " + show_play(g, pre)});
    }
  }
  for (const auto& p : s.plays)
    for (const auto& q : s.plays) {
      std::size_t k = 0;
      while (k < p.size() && k < q.size() && p[k] == q[k]) ++k;
      Play lcp(p.begin(), p.begin() + k);
      // even-branching: the longest common prefix is even-below both
      bool ok = even_prefix_of(lcp, p) && even_prefix_of(lcp, q);
      if (!ok)
        out.push_back({"not-even-branching", show_play(g, p) + " vs " + show_play(g, q)});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Orders and the strategy biorder
// ---------------------------------------------------------------------------

/// s <=E t: s even and a prefix of t, or t odd and a prefix of s.
inline bool play_leq(const Play& s, const Play& t) {
  auto prefix = [](const Play& a, const Play& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
  };
  if (s.size() % 2 == 0 && prefix(s, t)) return true;
  if (t.size() % 2 == 1 && prefix(t, s)) return true;
  return false;
}

inline bool strat_leq(const Strategy& a, const Strategy& b) {
  for (const auto& s : a.plays) {
    bool found = false;
    for (const auto& t : b.plays)
      if (play_leq(s, t)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

inline constexpr std::uint64_t kStrategyBudget = std::uint64_t(1) << 16;

/// All strategies over A, in subset-bitmask order over the sorted nonempty
/// plays.
inline std::vector<Strategy> enumerate_strategies(const GamePtr& g,
                                                  std::uint64_t budget = kStrategyBudget) {
  std::vector<Play> nonempty;
  for (const auto& p : g->plays)
    if (!p.empty()) nonempty.push_back(p);
  if (nonempty.size() >= 63 || (std::uint64_t(1) << nonempty.size()) > budget)
    fail("enumeration-budget-exceeded",
         "2^" + std::to_string(nonempty.size()) + " candidate strategy subsets");
  std::vector<Strategy> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << nonempty.size()); ++mask) {
    Strategy s{g, {Play{}}};
    for (std::size_t i = 0; i < nonempty.size(); ++i)
      if (mask & (std::uint64_t(1) << i)) s.plays.insert(nonempty[i]);
    if (validate_strategy(s).empty()) out.push_back(std::move(s));
  }
  return out;
}

inline std::string strategy_label(const Game& g, const Strategy& s) {
  std::string l = "{";
  bool first = true;
  for (const auto& p : s.plays) {
    if (p.empty()) continue;
    if (!first) l += ";";
    first = false;
    l += show_play(g, p);
  }
  return l + "}";
}

struct StratBiorder {
  GamePtr game;
  BiorderPtr biorder;
  std::vector<Strategy> strategies;  // index-aligned with biorder elements

  std::size_t index_of(const Strategy& s) const {
    for (std::size_t i = 0; i < strategies.size(); ++i)
      if (strategies[i].plays == s.plays) return i;
    fail("not-a-strategy", "strategy not in the enumerated carrier");
  }
};

/// The strategy biorder: order strat_leq, coherence "same even plays",
/// meets and joins within classes are intersection and union.
inline StratBiorder strat_biorder(const GamePtr& g, std::uint64_t budget = kStrategyBudget) {
  StratBiorder r;
  r.game = g;
  r.strategies = enumerate_strategies(g, budget);
  const std::size_t n = r.strategies.size();
  auto b = std::make_shared<FiniteBiorder>();
  for (const auto& s : r.strategies) b->elements.push_back(strategy_label(*g, s));
  b->leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b->leq[i][j] = strat_leq(r.strategies[i], r.strategies[j]);
  std::map<PlaySet, std::vector<std::size_t>> by_even;
  for (std::size_t i = 0; i < n; ++i)
    by_even[even_part(r.strategies[i].plays)].push_back(i);
  b->class_of.assign(n, 0);
  for (auto& [key, members] : by_even) b->classes.push_back(members);
  std::sort(b->classes.begin(), b->classes.end());
  for (std::size_t c = 0; c < b->classes.size(); ++c)
    for (std::size_t i : b->classes[c]) b->class_of[i] = c;
  r.biorder = b;
  return r;
}

// ---------------------------------------------------------------------------
// The affine arrow and tensor
// ---------------------------------------------------------------------------

struct ComposedGame {
  GamePtr game;
  GamePtr left, right;
  // move origin: (0, i) = left move i, (1, j) = right move j
  std::vector<std::pair<int, std::size_t>> origin;

  Play restrict_to(const Play& s, int side) const {
    Play r;
    for (std::size_t m : s)
      if (origin[m].first == side) r.push_back(origin[m].second);
    return r;
  }
};

namespace gdetail {

/// Interleavings of component plays that alternate in the composed
/// polarities, starting with Opponent, one occurrence per move.
inline ComposedGame compose_games(const GamePtr& left, const GamePtr& right, bool flip_left,
                                  const std::string& lp, const std::string& rp) {
  ComposedGame c;
  c.left = left;
  c.right = right;
  std::vector<std::string> ids;
  std::vector<Polarity> pol;
  for (std::size_t i = 0; i < left->moves(); ++i) {
    ids.push_back(lp + left->move_ids[i]);
    Polarity p = left->polarity[i];
    if (flip_left) p = (p == Polarity::O) ? Polarity::P : Polarity::O;
    pol.push_back(p);
    c.origin.emplace_back(0, i);
  }
  for (std::size_t j = 0; j < right->moves(); ++j) {
    ids.push_back(rp + right->move_ids[j]);
    pol.push_back(right->polarity[j]);
    c.origin.emplace_back(1, j);
  }
  // BFS over legal extensions
  PlaySet plays;
  std::vector<Play> frontier{Play{}};
  plays.insert(Play{});
  while (!frontier.empty()) {
    std::vector<Play> next;
    for (const auto& s : frontier) {
      for (std::size_t m = 0; m < ids.size(); ++m) {
        if (std::find(s.begin(), s.end(), m) != s.end()) continue;
        Polarity want = (s.size() % 2 == 0) ? Polarity::O : Polarity::P;
        if (pol[m] != want) continue;
        Play s2 = s;
        s2.push_back(m);
        Play rl, rr;
        for (std::size_t mm : s2)
          (c.origin[mm].first == 0 ? rl : rr).push_back(c.origin[mm].second);
        if (!left->play_set.count(rl) || !right->play_set.count(rr)) continue;
        if (plays.insert(s2).second) next.push_back(std::move(s2));
      }
    }
    frontier = std::move(next);
  }
  c.game = finish_game(std::move(ids), std::move(pol), std::move(plays));
  return c;
}

}  // namespace gdetail

/// A -o B: left polarities flipped, plays are alternating interleavings
/// whose restrictions are plays of the components.
inline ComposedGame affine_arrow(const GamePtr& a, const GamePtr& b) {
  return gdetail::compose_games(a, b, /*flip_left=*/true, "A.", "B.");
}

/// Tensor-style pairing without polarity flip (used to build regression
/// games only).
inline ComposedGame tensor(const GamePtr& a, const GamePtr& b) {
  return gdetail::compose_games(a, b, /*flip_left=*/false, "L.", "R.");
}

/// Affine application: { t|B : t in sigma, t|A in tau }.
inline Strategy affine_apply(const ComposedGame& ab, const Strategy& sigma,
                             const Strategy& tau) {
  Strategy r{ab.right, {}};
  for (const auto& t : sigma.plays)
    if (tau.plays.count(ab.restrict_to(t, 0))) r.plays.insert(ab.restrict_to(t, 1));
  r.plays.insert(Play{});
  return r;
}

// ---------------------------------------------------------------------------
// ! and promotion
// ---------------------------------------------------------------------------

struct BangGame {
  GamePtr game;
  GamePtr base;
  std::vector<Play> move_play;  // composed move index -> play of the base game
};

/// |s|^E: the answered plays (even positions) plus the final move, plus
/// the empty play.
inline PlaySet ebar(const BangGame& bg, const Play& s) {
  PlaySet r;
  r.insert(Play{});
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i % 2 == 1 || i + 1 == s.size()) r.insert(bg.move_play[s[i]]);
  return r;
}

inline BangGame bang(const GamePtr& a, std::uint64_t budget = kStrategyBudget) {
  BangGame bg;
  bg.base = a;
  std::vector<std::string> ids;
  std::vector<Polarity> pol;
  for (const auto& p : a->plays) {
    if (p.empty()) continue;
    bg.move_play.push_back(p);
    ids.push_back(show_play(*a, p));
    pol.push_back(a->polarity[p.back()]);
  }
  // plays: alternating from !A's O (odd base plays), one occurrence each,
  // every prefix's answer set a strategy of A
  PlaySet plays;
  plays.insert(Play{});
  std::vector<Play> frontier{Play{}};
  while (!frontier.empty()) {
    std::vector<Play> next;
    for (const auto& s : frontier) {
      for (std::size_t m = 0; m < ids.size(); ++m) {
        if (std::find(s.begin(), s.end(), m) != s.end()) continue;
        Polarity want = (s.size() % 2 == 0) ? Polarity::O : Polarity::P;
        if (pol[m] != want) continue;
        Play s2 = s;
        s2.push_back(m);
        Strategy probe{a, ebar(bg, s2)};
        if (!validate_strategy(probe).empty()) continue;
        if (plays.insert(s2).second) next.push_back(std::move(s2));
        if (plays.size() > budget) fail("enumeration-budget-exceeded", "bang play set");
      }
    }
    frontier = std::move(next);
  }
  bg.game = finish_game(std::move(ids), std::move(pol), std::move(plays));
  return bg;
}

/// Promotion: all !A plays whose answer sets stay inside sigma.
inline Strategy promote(const BangGame& bg, const Strategy& sigma) {
  Strategy r{bg.game, {}};
  for (const auto& s : bg.game->plays) {
    const PlaySet eb = ebar(bg, s);
    bool inside = true;
    for (const auto& p : eb)
      if (!sigma.plays.count(p)) { inside = false; break; }
    if (inside) r.plays.insert(s);
  }
  return r;
}

// ---------------------------------------------------------------------------
// The function-space game A => B = !A -o B
// ---------------------------------------------------------------------------

struct ArrowGame {
  ComposedGame comp;  // !A -o B
  BangGame bangA;
  GamePtr a, b;

  const GamePtr& game() const { return comp.game; }
};

inline ArrowGame arrow(const GamePtr& a, const GamePtr& b,
                       std::uint64_t budget = kStrategyBudget) {
  ArrowGame g;
  g.a = a;
  g.b = b;
  g.bangA = bang(a, budget);
  g.comp = affine_arrow(g.bangA.game, b);
  return g;
}

/// sigma . tau = { s|B : s in sigma, |s|!A|^E included in tau }.
inline Strategy apply_strategy(const ArrowGame& ab, const Strategy& sigma,
                               const Strategy& tau) {
  Strategy r{ab.b, {}};
  for (const auto& s : sigma.plays) {
    Play sa = ab.comp.restrict_to(s, 0);
    const PlaySet eb = ebar(ab.bangA, sa);
    bool inside = true;
    for (const auto& p : eb)
      if (!tau.plays.count(p)) { inside = false; break; }
    if (inside) r.plays.insert(ab.comp.restrict_to(s, 1));
  }
  r.plays.insert(Play{});
  return r;
}

/// The function computed by a strategy on A => B, as a table between the
/// strategy biorders.
inline BiFunction realized(const ArrowGame& ab, const Strategy& sigma, const StratBiorder& sa,
                           const StratBiorder& sb) {
  BiFunction f{sa.biorder, sb.biorder, std::vector<std::size_t>(sa.strategies.size())};
  for (std::size_t i = 0; i < sa.strategies.size(); ++i)
    f.table[i] = sb.index_of(apply_strategy(ab, sigma, sa.strategies[i]));
  return f;
}

// ---------------------------------------------------------------------------
// Trace and sequentialization
// ---------------------------------------------------------------------------

/// (sigma, t) with t produced by f at sigma, sigma minimal among
/// inclusion-compatible strategies producing t.
struct TracePair {
  PlaySet input;  // strategy plays on A
  Play output;    // play of B

  bool operator<(const TracePair& o) const {
    if (input != o.input) return input < o.input;
    return output < o.output;
  }
  bool operator==(const TracePair& o) const {
    return input == o.input && output == o.output;
  }
};

/// Upper-bound compatibility in the inclusion order among strategies.
inline bool inclusion_compatible(const std::vector<Strategy>& all, const PlaySet& a,
                                 const PlaySet& b) {
  for (const auto& rho : all) {
    bool ok = true;
    for (const auto& p : a)
      if (!rho.plays.count(p)) { ok = false; break; }
    if (!ok) continue;
    for (const auto& p : b)
      if (!rho.plays.count(p)) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

/// Alternative compatibility reading (<=E-bounded), kept for comparison in
/// tests only.
inline bool order_compatible(const std::vector<Strategy>& all, const GamePtr& g,
                             const PlaySet& a, const PlaySet& b) {
  for (const auto& rho : all)
    if (strat_leq(Strategy{g, a}, rho) && strat_leq(Strategy{g, b}, rho)) return true;
  return false;
}

inline bool is_stable(const BiFunction& f, const StratBiorder& sa, const StratBiorder& sb) {
  const auto& S = sa.strategies;
  for (std::size_t r = 0; r < S.size(); ++r)
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (!std::includes(S[r].plays.begin(), S[r].plays.end(), S[i].plays.begin(),
                         S[i].plays.end()))
        continue;
      for (std::size_t j = 0; j < S.size(); ++j) {
        if (!std::includes(S[r].plays.begin(), S[r].plays.end(), S[j].plays.begin(),
                           S[j].plays.end()))
          continue;
        PlaySet inter;
        std::set_intersection(S[i].plays.begin(), S[i].plays.end(), S[j].plays.begin(),
                              S[j].plays.end(), std::inserter(inter, inter.begin()));
        std::size_t meet_idx = sa.index_of(Strategy{sa.game, inter});
        PlaySet fi = sb.strategies[f(i)].plays;
        PlaySet fj = sb.strategies[f(j)].plays;
        PlaySet fmeet;
        std::set_intersection(fi.begin(), fi.end(), fj.begin(), fj.end(),
                              std::inserter(fmeet, fmeet.begin()));
        if (sb.strategies[f(meet_idx)].plays != fmeet) return false;
      }
    }
  return true;
}

enum class CompatReading { Inclusion, Order };

/// The trace of a bistable function between strategy biorders.
inline std::set<TracePair> trace(const BiFunction& f, const StratBiorder& sa,
                                 const StratBiorder& sb,
                                 CompatReading reading = CompatReading::Inclusion) {
  if (!is_monotone(f) || !is_bistable(f)) fail("not-bistable", "trace needs a bistable function");
  if (!is_stable(f, sa, sb)) fail("not-bistable", "trace needs a stable function");
  std::set<TracePair> out;
  const auto& S = sa.strategies;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const PlaySet& fi = sb.strategies[f(i)].plays;
    for (const auto& t : fi) {
      bool minimal = true;
      for (std::size_t j = 0; j < S.size() && minimal; ++j) {
        bool compat = reading == CompatReading::Inclusion
                          ? inclusion_compatible(S, S[i].plays, S[j].plays)
                          : order_compatible(S, sa.game, S[i].plays, S[j].plays);
        if (!compat) continue;
        if (!sb.strategies[f(j)].plays.count(t)) continue;
        if (!std::includes(S[j].plays.begin(), S[j].plays.end(), S[i].plays.begin(),
                           S[i].plays.end()))
          minimal = false;
      }
      if (minimal) out.insert(TracePair{S[i].plays, t});
    }
  }
  return out;
}

/// sigma_f: plays of A => B all of whose even prefixes (and the play
/// itself) project into the trace.
inline Strategy sequentialize(const BiFunction& f, const ArrowGame& ab, const StratBiorder& sa,
                              const StratBiorder& sb,
                              CompatReading reading = CompatReading::Inclusion) {
  std::set<TracePair> tr = trace(f, sa, sb, reading);
  Strategy r{ab.game(), {}};
  for (const auto& s : ab.game()->plays) {
    bool ok = true;
    for (std::size_t k = 0; k <= s.size() && ok; ++k) {
      if (!(k == s.size() || k % 2 == 0)) continue;  // t <=E^prefix s: even prefixes and s
      Play t(s.begin(), s.begin() + k);
      TracePair probe{ebar(ab.bangA, ab.comp.restrict_to(t, 0)), ab.comp.restrict_to(t, 1)};
      if (!tr.count(probe)) ok = false;
    }
    if (ok) r.plays.insert(s);
  }
  r.plays.insert(Play{});
  return r;
}

// ---------------------------------------------------------------------------
// Sequentiality indices and the lightning construction
// ---------------------------------------------------------------------------

/// The unique play pc not in sigma such that sigma + {pc} is a strategy
/// and f(sigma + {pc}) already contains t's next move. Errors with
/// "hypotheses-unmet" when the trace-side hypotheses fail.
inline Play seq_index(const BiFunction& f, const StratBiorder& sa, const StratBiorder& sb,
                      const PlaySet& sigma, const Play& t) {
  std::set<TracePair> tr = trace(f, sa, sb);
  bool witnessed = false;
  for (const auto& pr : tr)
    if (pr.output == t) {
      PlaySet te = even_part(pr.input);
      bool sub = true;
      for (const auto& p : sigma)
        if (!te.count(p) && !pr.input.count(p)) { sub = false; break; }
      if (sub) witnessed = true;
    }
  if (!witnessed) fail("hypotheses-unmet", "(tau, t) not in the trace with sigma below tau");
  if (t.empty()) fail("hypotheses-unmet", "t must be nonempty");
  std::size_t si = sa.index_of(Strategy{sa.game, sigma});
  Play t_next(t.begin(), t.end() - (t.size() % 2 == 0 ? 1 : 0));  // t's odd truncation
  if (sb.strategies[f(si)].plays.count(t_next))
    fail("hypotheses-unmet", "sigma already produces the next move of t");
  std::optional<Play> found;
  for (const auto& s : sa.strategies) {
    // candidates: sigma plus exactly one new play pc
    if (s.plays.size() != sigma.size() + 1) continue;
    bool super = true;
    Play extra;
    for (const auto& p : s.plays)
      if (!sigma.count(p)) {
        if (!extra.empty()) { super = false; break; }
        extra = p;
        if (p.empty()) { super = false; break; }
      }
    for (const auto& p : sigma)
      if (!s.plays.count(p)) { super = false; break; }
    if (!super) continue;
    if (!sb.strategies[f(sa.index_of(s))].plays.count(t_next)) continue;
    if (found) fail("hypotheses-unmet", "sequentiality index is not unique");
    found = extra;
  }
  if (!found) fail("hypotheses-unmet", "no sequentiality index exists");
  return *found;
}

namespace gdetail {

inline std::optional<Play> find_unique_truncation(const std::set<TracePair>& tr,
                                                  const PlaySet& tau, const Play& out) {
  // unique pcd in tau with ((tau - {pcd}) + {pc}, out) in the trace
  std::optional<Play> found;
  for (const auto& pcd : tau) {
    if (pcd.size() < 2 || pcd.size() % 2 != 0) continue;
    PlaySet mod = tau;
    mod.erase(pcd);
    Play pc(pcd.begin(), pcd.end() - 1);
    mod.insert(pc);
    if (tr.count(TracePair{mod, out})) {
      if (found) fail("hypotheses-unmet", "lightning: non-unique truncation");
      found = pcd;
    }
  }
  return found;
}

}  // namespace gdetail

/// Builds the play of sigma_f witnessing a trace pair: restriction to !A
/// has answer set tau and restriction to B is t. Follows the recursive
/// case analysis on the last move of t.
inline Play lightning(const PlaySet& tau, const Play& t, const BiFunction& f,
                      const ArrowGame& ab, const StratBiorder& sa, const StratBiorder& sb) {
  std::set<TracePair> tr = trace(f, sa, sb);
  if (!tr.count(TracePair{tau, t}))
    fail("hypotheses-unmet", "(tau, t) is not a trace pair");

  // move encodings in the composed game
  auto bang_move = [&](const Play& p) -> std::size_t {
    for (std::size_t m = 0; m < ab.comp.origin.size(); ++m)
      if (ab.comp.origin[m].first == 0 &&
          ab.bangA.move_play[ab.comp.origin[m].second] == p)
        return m;
    fail("hypotheses-unmet", "play is not a move of !A");
  };
  auto b_move = [&](std::size_t j) -> std::size_t {
    for (std::size_t m = 0; m < ab.comp.origin.size(); ++m)
      if (ab.comp.origin[m].first == 1 && ab.comp.origin[m].second == j) return m;
    fail("internal", "missing B move");
  };

  std::function<Play(const PlaySet&, const Play&)> go = [&](const PlaySet& tau2,
                                                            const Play& t2) -> Play {
    if (t2.empty()) {
      if (tau2 != PlaySet{Play{}})
        fail("hypotheses-unmet", "empty output with nontrivial input");
      return Play{};
    }
    const PlaySet tauE = even_part(tau2);
    const bool tau_even = (tauE == tau2);
    if (t2.size() % 2 == 0) {
      // t2 = t0 a b; tau2 is all even
      Play t0(t2.begin(), t2.end() - 2);
      Play t0a(t2.begin(), t2.end() - 1);
      if (tr.count(TracePair{tau2, t0})) {
        Play s = go(tau2, t0);
        s.push_back(b_move(t2[t2.size() - 2]));
        s.push_back(b_move(t2[t2.size() - 1]));
        return s;
      }
      auto pcd = gdetail::find_unique_truncation(tr, tau2, t0a);
      if (!pcd) fail("hypotheses-unmet", "no predecessor trace pair (even case)");
      PlaySet mod = tau2;
      mod.erase(*pcd);
      mod.insert(Play(pcd->begin(), pcd->end() - 1));
      Play s = go(mod, t0a);
      s.push_back(bang_move(*pcd));
      s.push_back(b_move(t2[t2.size() - 1]));
      return s;
    }
    // t2 odd: t2 = t0 a
    Play t0(t2.begin(), t2.end() - 1);
    if (tau_even) {
      if (tr.count(TracePair{tau2, t0})) {
        Play s = go(tau2, t0);
        s.push_back(b_move(t2.back()));
        return s;
      }
      auto pcd = gdetail::find_unique_truncation(tr, tau2, t2);
      if (!pcd) fail("hypotheses-unmet", "no predecessor trace pair (odd case)");
      PlaySet mod = tau2;
      mod.erase(*pcd);
      mod.insert(Play(pcd->begin(), pcd->end() - 1));
      Play s = go(mod, t2);
      s.push_back(bang_move(*pcd));
      return s;
    }
    // tau2 has a unique odd play q (the pending error answer)
    Play q;
    for (const auto& p : tau2)
      if (p.size() % 2 == 1) {
        if (!q.empty()) fail("hypotheses-unmet", "two odd plays in a trace input");
        q = p;
      }
    if (tr.count(TracePair{tauE, t0})) {
      Play s = go(tauE, t0);
      s.push_back(b_move(t2.back()));
      s.push_back(bang_move(q));
      return s;
    }
    auto pcd = gdetail::find_unique_truncation(tr, tauE, t2);
    if (!pcd) fail("hypotheses-unmet", "no predecessor trace pair (odd input case)");
    PlaySet mod = tauE;
    mod.erase(*pcd);
    mod.insert(Play(pcd->begin(), pcd->end() - 1));
    Play s = go(mod, t2);
    s.push_back(bang_move(*pcd));
    s.push_back(bang_move(q));
    return s;
  };
  return go(tau, t);
}

}  // namespace bistable
