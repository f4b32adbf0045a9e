#include <catch2/catch_amalgamated.hpp>

#include "bistable/json_io.hpp"

using namespace bistable;

TEST_CASE("biorder json round-trips on library-built biorders") {
  std::vector<BiorderPtr> pool{sigma(),
                               unit_biorder(),
                               empty_biorder(),
                               flat(3),
                               bilift(flat(4)),
                               product(sigma(), sigma()),
                               coproduct(sigma(), bilift(flat(2))),
                               exponential(sigma(), sigma()).biorder};
  for (const auto& b : pool) {
    Json j = biorder_to_json(*b);
    auto back = biorder_from_json(j);
    REQUIRE(*back == *b);
    // emitted bytes are stable
    REQUIRE(biorder_to_json(*back).dump() == j.dump());
  }
}

TEST_CASE("the loader closes a transitive reduction") {
  // chain bot < mid < top given without the bot < top pair
  Json j;
  j["elements"] = {"bot", "()", "top"};
  j["leq"] = Json::array({Json::array({0, 1}), Json::array({1, 2})});
  j["classes"] = Json::array({Json::array({0, 2}), Json::array({1})});
  auto b = biorder_from_json(j);
  REQUIRE(b->le(0, 2));
  REQUIRE(b->le(0, 0));
  REQUIRE(validate(*b).empty());
  REQUIRE(*b == *bilift(unit_biorder()));
}

TEST_CASE("malformed biorder json is rejected") {
  REQUIRE_THROWS_AS(biorder_from_json(Json::parse(R"({"elements": []})")), Error);
  REQUIRE_THROWS_AS(biorder_from_json(Json::parse(R"({"elements": ["x"], "leq": [[0]],
                                                     "classes": [[0]]})")),
                    Error);
}

TEST_CASE("function json round-trips") {
  auto e = exponential(product(sigma(), sigma()), sigma());
  for (const auto& f : e.functions) {
    Json j = bifunction_to_json(f);
    BiFunction back = bifunction_from_json(j);
    REQUIRE(back == f);
  }
  // table out of range
  Json j = bifunction_to_json(e.functions[0]);
  j["table"][0] = 99;
  REQUIRE_THROWS_AS(bifunction_from_json(j), Error);
}

TEST_CASE("game and strategy json round-trip") {
  auto o = one_move_game();
  auto ab = arrow(o, o);
  for (const auto& g : {o, qa_game(), ab.game()}) {
    Json j = game_to_json(*g);
    GamePtr back = game_from_json(j);
    REQUIRE(back->move_ids == g->move_ids);
    REQUIRE(back->polarity == g->polarity);
    REQUIRE(back->plays == g->plays);
    REQUIRE(game_to_json(*back).dump() == j.dump());
    for (const auto& s : enumerate_strategies(g)) {
      Strategy s2 = strategy_from_json(strategy_to_json(s));
      REQUIRE(s2.plays == s.plays);
    }
  }
}

TEST_CASE("the empty play is implicit in the wire format") {
  auto o = one_move_game();
  Json j = game_to_json(*o);
  for (const auto& p : j["plays"]) REQUIRE_FALSE(p.empty());
  REQUIRE(game_from_json(j)->play_set.count(Play{}) == 1);
}
