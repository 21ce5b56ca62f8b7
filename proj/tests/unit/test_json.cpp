#include "doctest.h"
#include "dialogos/json_io.hpp"
#include "support/figure_games.hpp"

using namespace dialogos;

TEST_CASE("moves round trip") {
  std::vector<Move> moves{
      Move::make_attack(AttackSymbol::and_left(), 0),
      Move::make_attack(AttackSymbol::and_right(), 2),
      Move::make_attack(AttackSymbol::or_query(), 0),
      Move::make_attack(AttackSymbol::exists_query(), 0),
      Move::make_attack(AttackSymbol::forall_at(parse_term("f(c, v0)")), 4),
      Move::make_attack(AttackSymbol::formula_attack(parse_formula("a(c)")), 2),
      Move::make_defence(parse_formula("forall y. a(y)"), 3),
  };
  for (const auto& m : moves) {
    Json j = to_json(m);
    CHECK(move_from_json(parse_json(j.dump())) == m);
  }
  CHECK_THROWS_AS(move_from_json(parse_json(R"({"polarity":"?","attack":{"kind":"nope"},"enabler":0})")), FormatError);
  CHECK_THROWS_AS(move_from_json(parse_json(R"({"polarity":"!","formula":"a","enabler":-1})")), FormatError);
}

TEST_CASE("strategies round trip") {
  for (const auto& s : {figure::left_strategy(), figure::middle_strategy(), figure::third_strategy()}) {
    Json j = to_json(s);
    CHECK(document_kind(j) == DocumentKind::Strategy);
    Strategy back = strategy_from_json(parse_json(j.dump(2)));
    CHECK(back.root == s.root);
    CHECK(canonical_form(back) == canonical_form(s));
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("games round trip and are checked") {
  auto s = figure::left_strategy();
  auto games = strategy_games(s);
  REQUIRE_FALSE(games.empty());
  for (const auto& g : games) {
    Json j = to_json(g);
    CHECK(document_kind(j) == DocumentKind::Game);
    Game back = game_from_json(j);
    CHECK(back.moves == g.moves);
  }
  Json bad = {{"formula", "a | b"}, {"moves", Json::array({to_json(Move::make_attack(AttackSymbol::and_left(), 0))})}};
  CHECK_THROWS(game_from_json(bad));
}

TEST_CASE("derivations round trip") {
  auto d = prove({{parse_formula("forall x. c(x)")}, {parse_formula("exists x. c(x)")}}, {});
  REQUIRE(d);
  Json j = to_json(*d);
  CHECK(document_kind(j) == DocumentKind::Derivation);
  Derivation back = derivation_from_json(parse_json(j.dump()));
  CHECK(validate_derivation(back).ok);
  CHECK(to_json(back) == j);
  CHECK(document_kind(parse_json("[1]")) == DocumentKind::Unknown);
}
