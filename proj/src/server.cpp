#include "dialogos/server.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "httplib.h"

namespace dialogos {

const char* to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::AwaitingHuman: return "AwaitingHuman";
    case SessionStatus::AwaitingMachine: return "AwaitingMachine";
    case SessionStatus::FinishedPWin: return "FinishedPWin";
    case SessionStatus::FinishedOWin: return "FinishedOWin";
  }
  return "?";
}

Json to_json(const SessionView& v) {
  return {{"id", v.id},
          {"status", to_string(v.status)},
          {"machine_strategy", v.has_strategy},
          {"fallback", v.fallback},
          {"game", to_json(v.game)}};
}

HumanMove human_move_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("a move request must be a JSON object");
  HumanMove h;
  if (j.contains("move")) {
    h.move = move_from_json(j.at("move"));
    return h;
  }
  if (!j.contains("index") || !j.at("index").is_number_unsigned())
    throw FormatError("a move request needs \"index\" or \"move\"");
  h.index = j.at("index").get<std::size_t>();
  if (j.contains("term")) {
    if (!j.at("term").is_string()) throw FormatError("\"term\" must be a string");
    h.term = j.at("term").get<std::string>();
  }
  return h;
}

namespace {

// ---------------------------------------------------------------------------
// Moves as schemas over the strategy's variables.

void move_variables(const Move& m, std::set<std::string>& out) {
  if (m.attack && m.attack->term)
    for (const auto& v : m.attack->term->variables()) out.insert(v);
  if (m.attack && m.attack->formula)
    for (const auto& v : m.attack->formula->free_vars()) out.insert(v);
  if (m.defence)
    for (const auto& v : m.defence->free_vars()) out.insert(v);
}

Move substitute_move(Move m, const Substitution& s) {
  if (m.attack && m.attack->term) m.attack->term = substitute(*m.attack->term, s);
  if (m.attack && m.attack->formula) m.attack->formula = substitute(*m.attack->formula, s);
  if (m.defence) m.defence = substitute(*m.defence, s);
  return m;
}

// The formula carrying the schematic content of a move, if any.
std::optional<Formula> move_body(const Move& m) {
  if (m.defence) return m.defence;
  if (m.attack && m.attack->formula) return m.attack->formula;
  if (m.attack && m.attack->term) return Formula::atom("term", {*m.attack->term});
  return std::nullopt;
}

// Matches the strategy move `pattern` against the human's `actual` move,
// extending `sigma` with bindings for the pattern variables it lacks.
bool match_move(const Move& pattern, const Move& actual, Substitution& sigma) {
  if (pattern.polarity != actual.polarity || pattern.enabler != actual.enabler) return false;
  if (pattern.attack && pattern.attack->kind != actual.attack->kind) return false;

  std::set<std::string> vars;
  move_variables(pattern, vars);
  Substitution rename, back;
  std::set<std::string> schematic;
  for (const auto& v : vars) {
    if (sigma.count(v)) continue;
    std::string s = "__s" + std::to_string(schematic.size());
    rename.emplace(v, Term::var(s));
    back.emplace(s, Term::var(v));
    schematic.insert(s);
  }
  Substitution full = sigma;
  for (const auto& [v, t] : rename) full.emplace(v, t);
  Move p = substitute_move(pattern, full);

  auto pb = move_body(p);
  auto ab = move_body(actual);
  if (!pb || !ab) return p == actual;
  auto found = match_pattern(*pb, schematic, *ab);
  if (!found) return false;
  for (const auto& [s, t] : *found) sigma.emplace(back.at(s).name(), t);
  // Variables the actual move does not pin down keep a name of their own.
  for (const auto& s : schematic)
    if (!found->count(s)) sigma.emplace(back.at(s).name(), back.at(s));
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

struct SessionManager::Session {
  std::mutex mutex;
  std::string id;
  Game game;
  std::optional<Strategy> strategy;
  const std::vector<StrategyNode>* cursor = nullptr;  // replies available at this point
  Substitution sigma;
  bool fallback = false;
  SessionStatus status = SessionStatus::AwaitingHuman;
  Clock::time_point last_used;

  explicit Session(Formula f) : game(std::move(f)) {}

  SessionView view() const { return {id, game, strategy.has_value(), fallback, status}; }
};

namespace {

using Deadline = std::chrono::steady_clock::time_point;

bool p_can_win(const Game& g, std::size_t plies, Deadline deadline) {
  if (std::chrono::steady_clock::now() > deadline) return false;
  auto moves = legal_moves(g, default_universe(g));
  if (moves.empty()) return g.next_player() == Player::O;
  if (plies == 0) return false;
  if (g.next_player() == Player::P) {
    for (const auto& m : moves)
      if (p_can_win(extend_game(g, m.move), plies - 1, deadline)) return true;
    return false;
  }
  for (const auto& m : moves)
    if (!p_can_win(extend_game(g, m.move), plies - 1, deadline)) return false;
  return true;
}

// Best-effort reply: a move that wins within the lookahead if there is one,
// otherwise the first legal move.
std::optional<Move> lookahead_move(const Game& g, const SearchLimits& limits) {
  auto moves = legal_moves(g, default_universe(g));
  if (moves.empty()) return std::nullopt;
  Deadline deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(limits.time_budget_ms / 4 + 1);
  for (std::size_t plies = 1; plies <= 9; plies += 2)
    for (const auto& m : moves)
      if (p_can_win(extend_game(g, m.move), plies, deadline)) return m.move;
  return moves.front().move;
}

void update_status(const Game& g, SessionStatus& status) {
  Winner w = game_winner(g, default_universe(g));
  if (w == Winner::P) status = SessionStatus::FinishedPWin;
  else if (w == Winner::O) status = SessionStatus::FinishedOWin;
  else status = g.next_player() == Player::O ? SessionStatus::AwaitingHuman : SessionStatus::AwaitingMachine;
}

}  // namespace

SessionManager::SessionManager(SearchLimits limits, std::chrono::seconds idle, std::function<Clock::time_point()> now)
    : limits_(limits), idle_(idle), now_(std::move(now)) {}

SessionView SessionManager::create(const std::string& formula) {
  auto s = std::make_shared<Session>(parse_formula(formula));
  try {
    s->strategy = find_winning_strategy(s->game.root, limits_);
  } catch (const TimeBudgetExceeded&) {
  }
  if (s->strategy && !is_winning(*s->strategy)) s->strategy.reset();
  if (s->strategy) {
    s->cursor = &s->strategy->children;
    for (const auto& v : s->game.root.free_vars()) s->sigma.emplace(v, Term::var(v));
  } else {
    s->fallback = true;
  }
  s->last_used = now_();
  update_status(s->game, s->status);

  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard<std::mutex> lock(mutex_);
  std::ostringstream id;
  id << std::hex << rng() << "-" << ++counter_;
  s->id = id.str();
  sessions_.emplace(s->id, s);
  return s->view();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSession("no session " + id);
  return it->second;
}

SessionView SessionManager::get(const std::string& id) {
  auto s = find(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  s->last_used = now_();
  return s->view();
}

std::vector<MoveDescriptor> SessionManager::legal_moves(const std::string& id) {
  auto s = find(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  s->last_used = now_();
  if (s->status != SessionStatus::AwaitingHuman) throw WrongTurn(std::string("session is ") + to_string(s->status));
  return dialogos::legal_moves(s->game, default_universe(s->game), true);
}

SessionView SessionManager::play(const std::string& id, const HumanMove& h) {
  auto s = find(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  s->last_used = now_();
  if (s->status != SessionStatus::AwaitingHuman) throw WrongTurn(std::string("session is ") + to_string(s->status));

  Move move = Move::make_defence(s->game.root, 0);
  if (h.move) {
    move = *h.move;
  } else {
    auto options = dialogos::legal_moves(s->game, default_universe(s->game), true);
    if (!h.index || *h.index >= options.size()) throw BadMove("bad-index", "no listed move with that index");
    const MoveDescriptor& d = options[*h.index];
    if (d.open_term && !h.term) throw BadMove("missing-term", "this move needs a term");
    if (!d.open_term && h.term) throw BadMove("unexpected-term", "this move takes no term");
    if (d.open_term) {
      Term t = Term::var("_");
      try {
        t = parse_term(*h.term);
      } catch (const ParseError& e) {
        throw BadMove("term-parse-error", e.what());
      }
      move = instantiate_descriptor(s->game, d, t);
    } else {
      move = d.move;
    }
  }
  if (auto bad = check_move(s->game, move)) throw BadMove(dialogos::to_string(bad->first), bad->second);
  s->game = extend_game(s->game, move);

  // Follow the strategy while the human's move fits one of its O branches.
  const StrategyNode* p_node = nullptr;
  if (s->cursor) {
    const std::vector<StrategyNode>* next = nullptr;
    for (const auto& child : *s->cursor) {
      Substitution trial = s->sigma;
      if (match_move(child.move, move, trial)) {
        s->sigma = std::move(trial);
        next = &child.children;
        break;
      }
    }
    if (next && !next->empty()) p_node = &next->front();
    s->cursor = nullptr;
  }

  s->status = SessionStatus::AwaitingMachine;
  update_status(s->game, s->status);
  if (s->status != SessionStatus::AwaitingMachine) return s->view();

  std::optional<Move> reply;
  if (p_node) {
    std::set<std::string> vars;
    move_variables(p_node->move, vars);
    std::set<std::string> taken = game_variable_names(s->game);
    for (const auto& [v, t] : s->sigma)
      for (const auto& n : t.variables()) taken.insert(n);
    for (const auto& v : vars) {
      if (s->sigma.count(v)) continue;
      std::string fresh = first_fresh_variable(taken);
      taken.insert(fresh);
      s->sigma.emplace(v, Term::var(fresh));
    }
    Move candidate = substitute_move(p_node->move, s->sigma);
    if (!check_move(s->game, candidate)) {
      reply = candidate;
      s->cursor = &p_node->children;
    }
  }
  if (!reply) {
    s->fallback = true;
    reply = lookahead_move(s->game, limits_);
  }
  if (!reply) {
    s->status = SessionStatus::FinishedOWin;
    return s->view();
  }
  s->game = extend_game(s->game, *reply);
  update_status(s->game, s->status);
  return s->view();
}

std::size_t SessionManager::expire_idle() {
  std::lock_guard<std::mutex> lock(mutex_);
  auto now = now_();
  std::size_t n = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock<std::mutex> session_lock(it->second->mutex, std::try_to_lock);
    if (session_lock.owns_lock() && now - it->second->last_used > idle_) {
      session_lock.unlock();
      it = sessions_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

std::size_t SessionManager::size() {
  std::lock_guard<std::mutex> lock(mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void error(httplib::Response& res, int status, const std::string& kind, const std::string& reason) {
  reply(res, status, {{"error", kind}, {"reason", reason}});
}

template <class F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const UnknownSession& e) {
    error(res, 404, "unknown-session", e.what());
  } catch (const WrongTurn& e) {
    error(res, 409, "wrong-turn", e.what());
  } catch (const BadMove& e) {
    error(res, 422, "illegal-move", std::string(e.reason()) + ": " + e.what());
  } catch (const ParseError& e) {
    error(res, 400, "parse-error", e.what());
  } catch (const FormatError& e) {
    error(res, 400, "bad-request", e.what());
  } catch (const std::exception& e) {
    error(res, 500, "internal", e.what());
  }
}

}  // namespace

void register_routes(httplib::Server& server, SessionManager& sessions) {
  server.Post("/v1/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      sessions.expire_idle();
      Json body = parse_json(req.body);
      if (!body.is_object() || !body.contains("formula") || !body.at("formula").is_string())
        throw FormatError("expected {\"formula\": string}");
      reply(res, 201, to_json(sessions.create(body.at("formula").get<std::string>())));
    });
  });
  server.Get(R"(/v1/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, to_json(sessions.get(req.matches[1]))); });
  });
  server.Get(R"(/v1/sessions/([^/]+)/moves)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      Json out = Json::array();
      auto moves = sessions.legal_moves(req.matches[1]);
      for (std::size_t i = 0; i < moves.size(); ++i) {
        Json d = to_json(moves[i]);
        d["index"] = i;
        out.push_back(d);
      }
      reply(res, 200, out);
    });
  });
  server.Post(R"(/v1/sessions/([^/]+)/moves)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      HumanMove h = human_move_from_json(parse_json(req.body));
      reply(res, 200, to_json(sessions.play(req.matches[1], h)));
    });
  });
}

bool serve(const std::string& host, int port, const SearchLimits& limits) {
  SessionManager sessions(limits);
  httplib::Server server;
  register_routes(server, sessions);
  return server.listen(host, port);
}

}  // namespace dialogos
