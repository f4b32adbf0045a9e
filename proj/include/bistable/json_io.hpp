#pragma once

// JSON wire formats:
//   biorder   {"elements": ["lbl", ...], "leq": [[i,j], ...],
//              "classes": [[i, ...], ...]}
//     leq may list any generating set (a reduction or the full relation);
//     the loader closes it reflexively and transitively.
//   function  {"dom": <biorder>, "cod": <biorder>, "table": [j0, j1, ...]}
//   game      {"moves": [["id", "O"|"P"], ...], "plays": [["id", ...], ...]}
//     the empty play is implicit.
//   strategy  {"game": <game>, "plays": [["id", ...], ...]}

#include <json.hpp>

#include <string>
#include <vector>

#include "bistable/bifun.hpp"
#include "bistable/biorder.hpp"
#include "bistable/games.hpp"

namespace bistable {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Biorders
// ---------------------------------------------------------------------------

inline Json biorder_to_json(const FiniteBiorder& b) {
  Json j;
  j["elements"] = b.elements;
  Json leq = Json::array();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (b.le(i, k)) leq.push_back(Json::array({i, k}));
  j["leq"] = std::move(leq);
  Json classes = Json::array();
  for (const auto& cl : b.classes) classes.push_back(cl);
  j["classes"] = std::move(classes);
  return j;
}

/// Parses, closes the order, and (by default) checks the axioms. Pass
/// check_axioms = false to obtain the raw structure for diagnostics.
inline BiorderPtr biorder_from_json(const Json& j, bool check_axioms = true) {
  if (!j.is_object() || !j.contains("elements") || !j.contains("leq") || !j.contains("classes"))
    fail("bad-json", "biorder needs elements, leq and classes");
  std::vector<std::string> elements = j.at("elements").get<std::vector<std::string>>();
  std::vector<std::pair<std::size_t, std::size_t>> leq;
  for (const auto& p : j.at("leq")) {
    if (!p.is_array() || p.size() != 2) fail("bad-json", "leq entries are index pairs");
    leq.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
  }
  std::vector<std::vector<std::size_t>> classes;
  for (const auto& cl : j.at("classes")) classes.push_back(cl.get<std::vector<std::size_t>>());
  BiorderPtr b = make_biorder(std::move(elements), leq, classes);
  if (check_axioms) {
    auto diags = validate(*b);
    if (!diags.empty())
      fail("invalid-biorder", diags[0].code + ": " + diags[0].message);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Functions
// ---------------------------------------------------------------------------

inline Json bifunction_to_json(const BiFunction& f) {
  Json j;
  j["dom"] = biorder_to_json(*f.dom);
  j["cod"] = biorder_to_json(*f.cod);
  j["table"] = f.table;
  return j;
}

inline BiFunction bifunction_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("cod") || !j.contains("table"))
    fail("bad-json", "function needs dom, cod and table");
  BiFunction f{biorder_from_json(j.at("dom")), biorder_from_json(j.at("cod")),
               j.at("table").get<std::vector<std::size_t>>()};
  if (f.table.size() != f.dom->size()) fail("bad-json", "table size does not match dom");
  for (std::size_t v : f.table)
    if (v >= f.cod->size()) fail("bad-json", "table value out of range");
  return f;
}

// ---------------------------------------------------------------------------
// Games and strategies
// ---------------------------------------------------------------------------

inline Json game_to_json(const Game& g) {
  Json j;
  Json moves = Json::array();
  for (std::size_t i = 0; i < g.moves(); ++i)
    moves.push_back(Json::array({g.move_ids[i], g.polarity[i] == Polarity::O ? "O" : "P"}));
  j["moves"] = std::move(moves);
  Json plays = Json::array();
  for (const auto& p : g.plays) {
    if (p.empty()) continue;  // implicit
    Json pj = Json::array();
    for (std::size_t m : p) pj.push_back(g.move_ids[m]);
    plays.push_back(std::move(pj));
  }
  j["plays"] = std::move(plays);
  return j;
}

inline GamePtr game_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("moves") || !j.contains("plays"))
    fail("bad-json", "game needs moves and plays");
  std::vector<std::string> ids;
  std::vector<Polarity> pol;
  std::map<std::string, std::size_t> by_id;
  for (const auto& m : j.at("moves")) {
    if (!m.is_array() || m.size() != 2) fail("bad-json", "moves are [id, polarity] pairs");
    std::string id = m[0].get<std::string>();
    std::string p = m[1].get<std::string>();
    if (p != "O" && p != "P") fail("bad-json", "polarity must be O or P");
    if (by_id.count(id)) fail("bad-json", "duplicate move id " + id);
    by_id[id] = ids.size();
    ids.push_back(id);
    pol.push_back(p == "O" ? Polarity::O : Polarity::P);
  }
  PlaySet plays;
  for (const auto& pj : j.at("plays")) {
    Play p;
    for (const auto& mid : pj) {
      auto it = by_id.find(mid.get<std::string>());
      if (it == by_id.end()) fail("bad-json", "unknown move id in play");
      p.push_back(it->second);
    }
    plays.insert(std::move(p));
  }
  return finish_game(std::move(ids), std::move(pol), std::move(plays));
}

inline Json strategy_to_json(const Strategy& s) {
  Json j;
  j["game"] = game_to_json(*s.game);
  Json plays = Json::array();
  for (const auto& p : s.plays) {
    if (p.empty()) continue;
    Json pj = Json::array();
    for (std::size_t m : p) pj.push_back(s.game->move_ids[m]);
    plays.push_back(std::move(pj));
  }
  j["plays"] = std::move(plays);
  return j;
}

inline Strategy strategy_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("game") || !j.contains("plays"))
    fail("bad-json", "strategy needs game and plays");
  GamePtr g = game_from_json(j.at("game"));
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < g->moves(); ++i) by_id[g->move_ids[i]] = i;
  Strategy s{g, {Play{}}};
  for (const auto& pj : j.at("plays")) {
    Play p;
    for (const auto& mid : pj) {
      auto it = by_id.find(mid.get<std::string>());
      if (it == by_id.end()) fail("bad-json", "unknown move id in play");
      p.push_back(it->second);
    }
    s.plays.insert(std::move(p));
  }
  return s;
}

}  // namespace bistable
