#ifndef DIALOGOS_SERVER_HPP
#define DIALOGOS_SERVER_HPP

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogos/json_io.hpp"
#include "dialogos/strategy.hpp"

namespace httplib {
class Server;
}

namespace dialogos {

enum class SessionStatus { AwaitingHuman, AwaitingMachine, FinishedPWin, FinishedOWin };
const char* to_string(SessionStatus s);

/// A snapshot of a session, safe to use after the session lock is released.
struct SessionView {
  std::string id;
  Game game;
  bool has_strategy = false;
  /// The machine left its strategy (or never had one) and searches per move.
  bool fallback = false;
  SessionStatus status = SessionStatus::AwaitingHuman;
};
Json to_json(const SessionView& v);

/// The human's choice: an index into the listed legal moves, plus a term for
/// open descriptors. A fully spelled-out move is accepted too.
struct HumanMove {
  std::optional<std::size_t> index;
  std::optional<std::string> term;
  std::optional<Move> move;
};
HumanMove human_move_from_json(const Json& j);

class UnknownSession : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class WrongTurn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// A human move that does not fit the rules or the listed descriptors.
class BadMove : public std::runtime_error {
 public:
  BadMove(std::string reason, const std::string& detail)
      : std::runtime_error(detail), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

/// Thread-safe session store. The human plays O; the machine plays P from a
/// winning strategy when one was found, replaying it up to the human's
/// choice of terms, and otherwise by bounded lookahead.
class SessionManager {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionManager(SearchLimits limits = {}, std::chrono::seconds idle = std::chrono::minutes(30),
                          std::function<Clock::time_point()> now = Clock::now);

  SessionView create(const std::string& formula);  // throws ParseError
  SessionView get(const std::string& id);
  std::vector<MoveDescriptor> legal_moves(const std::string& id);  // throws WrongTurn
  SessionView play(const std::string& id, const HumanMove& move);
  /// Drops sessions idle for longer than the timeout; returns how many.
  std::size_t expire_idle();
  std::size_t size();

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id);

  SearchLimits limits_;
  std::chrono::seconds idle_;
  std::function<Clock::time_point()> now_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

/// Registers the /v1 endpoints on an httplib server.
void register_routes(httplib::Server& server, SessionManager& sessions);
/// Blocks serving on host:port.
bool serve(const std::string& host, int port, const SearchLimits& limits);

}  // namespace dialogos

#endif  // DIALOGOS_SERVER_HPP
