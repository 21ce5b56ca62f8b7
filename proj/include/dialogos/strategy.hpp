#ifndef DIALOGOS_STRATEGY_HPP
#define DIALOGOS_STRATEGY_HPP

#include <optional>
#include <string>
#include <vector>

#include "dialogos/dialogue.hpp"
#include "dialogos/gkk.hpp"

namespace dialogos {

struct StrategyNode {
  Move move;
  std::vector<StrategyNode> children;
};

/// A prefix-closed set of games for `root`, stored as a tree. The initial
/// assertion of the root is implicit; `children` are the replies to it.
struct Strategy {
  Formula root;
  std::vector<StrategyNode> children;

  std::size_t size() const;  // number of moves including the initial one
};

/// Builds a strategy from complete move sequences sharing the root; common
/// prefixes are merged.
Strategy strategy_from_paths(const Formula& root, const std::vector<std::vector<Move>>& paths);

/// Every root-to-leaf game.
std::vector<Game> strategy_games(const Strategy& s);

/// `condition` is 1..5 for the strategy conditions and 0 for a path that is
/// not a legal game. `path` lists child indices from the root.
struct StrategyReport {
  bool ok = true;
  int condition = 0;
  NodePath path;
  std::string message;
};

/// Checks legality of every path and the strategy conditions: full O coverage
/// after ordinary P moves, P-determinism, canonical variables for O's
/// universal attacks and existential defences, and no P stalling after an
/// existential attack. Coverage is relative to `legal_moves` with an empty
/// universe, so term-indexed O moves use the canonical fresh variable only.
StrategyReport validate_strategy(const Strategy& s);

/// True iff the strategy is valid and every leaf game is won by P.
bool is_winning(const Strategy& s);

/// Proves `|- f` and turns the derivation into a strategy. nullopt means the
/// search bounds were exhausted.
std::optional<Strategy> find_winning_strategy(const Formula& f, const SearchLimits& limits);

/// Text form invariant under child order and renaming of the variables that
/// moves introduce; two strategies are isomorphic iff their forms agree.
std::string canonical_form(const Strategy& s);
bool isomorphic(const Strategy& a, const Strategy& b);

}  // namespace dialogos

#endif  // DIALOGOS_STRATEGY_HPP
