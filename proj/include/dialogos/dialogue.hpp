#ifndef DIALOGOS_DIALOGUE_HPP
#define DIALOGOS_DIALOGUE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogos/formula.hpp"

namespace dialogos {

enum class AttackKind { AndLeft, AndRight, OrQuery, ForallAt, ExistsQuery, FormulaAttack };

struct AttackSymbol {
  AttackKind kind;
  std::optional<Term> term;        // ForallAt only
  std::optional<Formula> formula;  // FormulaAttack only

  static AttackSymbol and_left() { return {AttackKind::AndLeft, {}, {}}; }
  static AttackSymbol and_right() { return {AttackKind::AndRight, {}, {}}; }
  static AttackSymbol or_query() { return {AttackKind::OrQuery, {}, {}}; }
  static AttackSymbol forall_at(Term t) { return {AttackKind::ForallAt, std::move(t), {}}; }
  static AttackSymbol exists_query() { return {AttackKind::ExistsQuery, {}, {}}; }
  static AttackSymbol formula_attack(Formula f) { return {AttackKind::FormulaAttack, {}, std::move(f)}; }

  friend bool operator==(const AttackSymbol& a, const AttackSymbol& b);
};

enum class Polarity { Attack, Defence };
enum class Player { P, O };

inline Player player_of(std::size_t index) { return index % 2 == 0 ? Player::P : Player::O; }

struct Move {
  Polarity polarity;
  std::optional<AttackSymbol> attack;  // set iff polarity == Attack
  std::optional<Formula> defence;      // set iff polarity == Defence
  std::optional<std::size_t> enabler;  // absent only for the initial move

  static Move make_attack(AttackSymbol a, std::size_t enabler) {
    return {Polarity::Attack, std::move(a), std::nullopt, enabler};
  }
  static Move make_defence(Formula f, std::size_t enabler) {
    return {Polarity::Defence, std::nullopt, std::move(f), enabler};
  }

  /// The formula this move asserts, if any: a defence's formula or the
  /// antecedent carried by a formula attack.
  std::optional<Formula> asserted() const;

  friend bool operator==(const Move& a, const Move& b);
};

struct Game {
  Formula root;
  std::vector<Move> moves;  // moves[0] = (!, root)

  explicit Game(Formula f);
  std::size_t size() const { return moves.size(); }
  Player next_player() const { return player_of(moves.size()); }
};

enum class IllegalReason { Parity, Enabler, Justification, AtomNotReprise, DuplicateDefence };
const char* to_string(IllegalReason r);

class IllegalMove : public std::runtime_error {
 public:
  IllegalMove(IllegalReason reason, const std::string& detail)
      : std::runtime_error(std::string(to_string(reason)) + ": " + detail), reason_(reason) {}
  IllegalReason reason() const { return reason_; }

 private:
  IllegalReason reason_;
};

class AtomNotAttackable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class MismatchedAttack : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A candidate move. `open_term` marks a term-parameterized move (universal
/// attack or existential defence) listed without a fixed term; the caller
/// fills it in with `instantiate_descriptor`.
struct MoveDescriptor {
  Player player;
  Move move;
  bool open_term = false;
};

std::vector<AttackSymbol> attack_options(const Formula& f, const std::vector<Term>& universe);
std::vector<Formula> defence_options(const Formula& asserted, const AttackSymbol& attack,
                                     const std::vector<Term>& universe);

/// nullopt when appending `m` keeps `g` a valid game; otherwise the reason.
std::optional<std::pair<IllegalReason, std::string>> check_move(const Game& g, const Move& m);

Game extend_game(const Game& g, const Move& m);
Game extend_game(const Game& g, const MoveDescriptor& d);

/// Re-checks every move of a game from scratch.
std::optional<std::string> validate_game(const Game& g);

/// Terms occurring in the game's asserted formulas and attack choices,
/// deduplicated in order of first appearance.
std::vector<Term> game_terms(const Game& g);
/// Every variable name appearing in the game (asserted formulas, free or
/// bound, and universal-attack terms).
std::set<std::string> game_variable_names(const Game& g);
/// The first variable of the canonical enumeration not appearing in g.
std::string game_fresh_variable(const Game& g);

/// All legal continuations with terms drawn from `universe` plus one fresh
/// variable. With `open_terms`, each universal attack and existential defence
/// is listed once with an open term slot instead.
std::vector<MoveDescriptor> legal_moves(const Game& g, const std::vector<Term>& universe,
                                        bool open_terms = false);

/// Default universe for a game: its terms, or a single witness when empty.
std::vector<Term> default_universe(const Game& g);

/// Fills the open term of a descriptor, producing a concrete move.
Move instantiate_descriptor(const Game& g, const MoveDescriptor& d, const Term& t);

enum class Winner { P, O, Open };
const char* to_string(Winner w);
Winner game_winner(const Game& g, const std::vector<Term>& universe);

struct PropositionReport {
  bool prop1 = true;
  bool prop2 = true;
  bool prop3 = true;
  std::vector<std::string> violations;
  bool ok() const { return prop1 && prop2 && prop3; }
};
PropositionReport check_propositions(const Game& g);

std::string render(const AttackSymbol& a);
std::string render(const Move& m);

}  // namespace dialogos

#endif  // DIALOGOS_DIALOGUE_HPP
