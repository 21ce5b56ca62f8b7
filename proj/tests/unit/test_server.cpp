#include <thread>

#include "doctest.h"
#include "dialogos/server.hpp"
#include "httplib.h"
#include "support/figure_games.hpp"

using namespace dialogos;

namespace {

using Choice = std::pair<std::size_t, std::optional<std::string>>;

// Replays a sequence of human choices in a fresh session.
SessionView replay(SessionManager& m, const std::string& formula, const std::vector<Choice>& choices) {
  SessionView v = m.create(formula);
  for (const auto& [i, term] : choices) v = m.play(v.id, {i, term, std::nullopt});
  return v;
}

// Plays every human choice sequence, with a few terms for open moves, and
// records the final status of each complete game.
void explore(SessionManager& m, const std::string& formula, std::vector<Choice>& prefix,
             std::vector<SessionStatus>& finals, std::size_t max_depth) {
  static const std::vector<std::string> terms{"c", "f(g(c))", "v0", "z"};
  SessionView v = replay(m, formula, prefix);
  if (v.status != SessionStatus::AwaitingHuman) {
    CHECK(validate_game(v.game) == std::nullopt);
    finals.push_back(v.status);
    return;
  }
  REQUIRE(prefix.size() < max_depth);
  auto moves = m.legal_moves(v.id);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    std::vector<std::optional<std::string>> options{std::nullopt};
    if (moves[i].open_term) options.assign(terms.begin(), terms.end());
    for (const auto& t : options) {
      prefix.push_back({i, t});
      explore(m, formula, prefix, finals, max_depth);
      prefix.pop_back();
    }
  }
}

}  // namespace

TEST_CASE("sessions start with or without a strategy") {
  SessionManager m;
  SessionView drinker = m.create(figure::kMiddle);
  CHECK(drinker.has_strategy);
  CHECK_FALSE(drinker.fallback);
  CHECK(drinker.status == SessionStatus::AwaitingHuman);
  auto first = m.legal_moves(drinker.id);
  REQUIRE(first.size() == 1);
  CHECK(first[0].move == Move::make_attack(AttackSymbol::exists_query(), 0));

  SessionView invalid = m.create("a -> b");
  CHECK_FALSE(invalid.has_strategy);
  CHECK(invalid.fallback);
  CHECK_THROWS_AS(m.create("a -> "), ParseError);
  CHECK_THROWS_AS(m.get("nope"), UnknownSession);
}

TEST_CASE("the machine answers along the drinker strategy") {
  SessionManager m;
  SessionView v = m.create(figure::kMiddle);
  v = m.play(v.id, {0, std::nullopt, std::nullopt});
  REQUIRE(v.game.size() == 3);
  auto asserted = v.game.moves[2].asserted();
  REQUIRE(asserted);
  CHECK(asserted->kind() == Connective::Implies);
  auto moves = m.legal_moves(v.id);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].move.attack->kind == AttackKind::FormulaAttack);
  CHECK(*moves[0].move.attack->formula == asserted->left());
}

TEST_CASE("every human line loses against a winning strategy") {
  for (const char* formula : {figure::kLeft, figure::kMiddle, figure::kThird}) {
    CAPTURE(formula);
    SessionManager m;
    std::vector<Choice> prefix;
    std::vector<SessionStatus> finals;
    explore(m, formula, prefix, finals, 12);
    CHECK(finals.size() >= 2);
    for (auto s : finals) CHECK(s == SessionStatus::FinishedPWin);
  }
}

TEST_CASE("exotic terms follow the strategy schematically") {
  SessionManager m;
  SessionView v = m.create(figure::kThird);
  auto moves = m.legal_moves(v.id);
  REQUIRE(moves.size() == 1);
  v = m.play(v.id, {0, std::nullopt, std::nullopt});
  while (v.status == SessionStatus::AwaitingHuman) {
    auto options = m.legal_moves(v.id);
    REQUIRE_FALSE(options.empty());
    std::optional<std::string> term;
    if (options.front().open_term) term = "f(g(c))";
    v = m.play(v.id, {0, term, std::nullopt});
  }
  CHECK(v.status == SessionStatus::FinishedPWin);
  CHECK_FALSE(v.fallback);
  CHECK(validate_game(v.game) == std::nullopt);
}

TEST_CASE("without a strategy the machine may lose") {
  SessionManager m;
  SessionView v = m.create("a -> b");
  v = m.play(v.id, {0, std::nullopt, std::nullopt});
  CHECK(v.status == SessionStatus::FinishedOWin);
  CHECK_THROWS_AS(m.legal_moves(v.id), WrongTurn);
  CHECK_THROWS_AS(m.play(v.id, {0, std::nullopt, std::nullopt}), WrongTurn);
}

TEST_CASE("bad human moves are rejected") {
  SessionManager m;
  SessionView v = m.create(figure::kLeft);
  CHECK_THROWS_AS(m.play(v.id, {7, std::nullopt, std::nullopt}), BadMove);
  CHECK_THROWS_AS(m.play(v.id, {0, std::string("c"), std::nullopt}), BadMove);
  try {
    m.play(v.id, {std::nullopt, std::nullopt, Move::make_attack(AttackSymbol::and_left(), 0)});
    FAIL("accepted an illegal move");
  } catch (const BadMove& e) {
    CHECK(e.reason() == "justification");
  }
  CHECK(m.get(v.id).game.size() == 1);

  v = m.play(v.id, {0, std::nullopt, std::nullopt});
  auto moves = m.legal_moves(v.id);
  REQUIRE(moves.size() == 1);
  REQUIRE(moves[0].open_term);
  CHECK_THROWS_AS(m.play(v.id, {0, std::nullopt, std::nullopt}), BadMove);
  CHECK_THROWS_AS(m.play(v.id, {0, std::string("f("), std::nullopt}), BadMove);
}

TEST_CASE("idle sessions expire") {
  auto now = SessionManager::Clock::time_point{};
  SessionManager m({}, std::chrono::minutes(30), [&] { return now; });
  SessionView a = m.create("a -> a");
  now += std::chrono::minutes(20);
  SessionView b = m.create("a -> a");
  now += std::chrono::minutes(15);
  CHECK(m.expire_idle() == 1);
  CHECK_THROWS_AS(m.get(a.id), UnknownSession);
  CHECK(m.get(b.id).id == b.id);
}

TEST_CASE("concurrent sessions") {
  SessionManager m;
  std::vector<std::thread> threads;
  std::atomic<int> wins{0};
  for (int k = 0; k < 4; ++k)
    threads.emplace_back([&] {
      for (int r = 0; r < 3; ++r) {
        SessionView v = m.create(figure::kLeft);
        while (v.status == SessionStatus::AwaitingHuman) {
          auto options = m.legal_moves(v.id);
          v = m.play(v.id, {0, options.front().open_term ? std::optional<std::string>("c") : std::nullopt, std::nullopt});
        }
        if (v.status == SessionStatus::FinishedPWin) ++wins;
      }
    });
  for (auto& t : threads) t.join();
  CHECK(wins == 12);
  CHECK(m.size() == 12);
}

TEST_CASE("http endpoints") {
  SessionManager sessions;
  httplib::Server server;
  register_routes(server, sessions);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/v1/sessions", R"j({"formula": "exists x. (a(x) -> forall y. a(y))"})j", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  Json session = Json::parse(created->body);
  std::string id = session["id"];
  CHECK(session["machine_strategy"] == true);
  CHECK(session["status"] == "AwaitingHuman");

  auto moves = client.Get("/v1/sessions/" + id + "/moves");
  REQUIRE(moves);
  Json list = Json::parse(moves->body);
  REQUIRE(list.size() == 1);
  CHECK(list[0]["move"]["attack"]["kind"] == "exists");

  auto played = client.Post("/v1/sessions/" + id + "/moves", R"({"index": 0})", "application/json");
  REQUIRE(played);
  CHECK(played->status == 200);
  CHECK(Json::parse(played->body)["game"]["moves"].size() == 2);

  auto got = client.Get("/v1/sessions/" + id);
  REQUIRE(got);
  CHECK(Json::parse(got->body)["game"] == Json::parse(played->body)["game"]);

  auto bad = client.Post("/v1/sessions", R"({"formula": "a &"})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  Json err = Json::parse(bad->body);
  CHECK(err["error"] == "parse-error");
  CHECK(err.contains("reason"));

  auto missing = client.Get("/v1/sessions/none");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto illegal = client.Post("/v1/sessions/" + id + "/moves", R"({"index": 5})", "application/json");
  REQUIRE(illegal);
  CHECK(illegal->status == 422);

  server.stop();
  worker.join();
}
