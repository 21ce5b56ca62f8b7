// The three winning strategies of the reference figure, transcribed move by
// move (indices in comments). `v` names the variable O picks; strategies use
// the canonical v0.
#pragma once

#include "dialogos/dialogue.hpp"
#include "dialogos/strategy.hpp"

namespace figure {

using namespace dialogos;

inline Formula f(const char* text) { return parse_formula(text); }
inline Term t(const char* text) { return parse_term(text); }
inline Formula f(const std::string& text) { return parse_formula(text); }
inline Term t(const std::string& text) { return parse_term(text); }

inline const char* kLeft = "forall x. a(x) | exists x. ~a(x)";
inline const char* kMiddle = "exists x. (a(x) -> forall y. a(y))";
inline const char* kThird = "forall x. (a(x) & b(x)) -> (forall x. a(x)) & (forall x. b(x))";

inline std::vector<Move> left_moves(const std::string& v = "w") {
  return {
      Move::make_attack(AttackSymbol::or_query(), 0),                  // 1
      Move::make_defence(f("forall x. a(x)"), 1),                      // 2
      Move::make_attack(AttackSymbol::forall_at(t(v)), 2),           // 3
      Move::make_defence(f("exists x. ~a(x)"), 1),                     // 4
      Move::make_attack(AttackSymbol::exists_query(), 4),              // 5
      Move::make_defence(f("~a(" + v + ")"), 5),                               // 6
      Move::make_attack(AttackSymbol::formula_attack(f("a(" + v + ")")), 6),   // 7
      Move::make_defence(f("a(" + v + ")"), 3),                                // 8
  };
}

inline std::vector<Move> middle_moves(const std::string& v = "w") {
  return {
      Move::make_attack(AttackSymbol::exists_query(), 0),              // 1
      Move::make_defence(f("a(c) -> forall y. a(y)"), 1),              // 2
      Move::make_attack(AttackSymbol::formula_attack(f("a(c)")), 2),   // 3
      Move::make_defence(f("forall y. a(y)"), 3),                      // 4
      Move::make_attack(AttackSymbol::forall_at(t(v)), 4),           // 5
      Move::make_defence(f("a(" + v + ") -> forall y. a(y)"), 1),              // 6
      Move::make_attack(AttackSymbol::formula_attack(f("a(" + v + ")")), 6),   // 7
      Move::make_defence(f("a(" + v + ")"), 5),                                // 8
  };
}

// First branch of the third strategy (O chooses the left conjunct).
inline std::vector<Move> third_moves(const std::string& v = "w") {
  return {
      Move::make_attack(AttackSymbol::formula_attack(f("forall x. (a(x) & b(x))")), 0),  // 1
      Move::make_defence(f("(forall x. a(x)) & (forall x. b(x))"), 1),                   // 2
      Move::make_attack(AttackSymbol::and_left(), 2),                                    // 3
      Move::make_defence(f("forall x. a(x)"), 3),                                        // 4
      Move::make_attack(AttackSymbol::forall_at(t(v)), 4),                             // 5
      Move::make_attack(AttackSymbol::forall_at(t(v)), 1),                             // 6
      Move::make_defence(f("a(" + v + ") & b(" + v + ")"), 6),                                           // 7
      Move::make_attack(AttackSymbol::and_left(), 7),                                    // 8
      Move::make_defence(f("a(" + v + ")"), 8),                                                  // 9
      Move::make_defence(f("a(" + v + ")"), 5),                                                  // 10
  };
}

// Second branch of the third strategy (O chooses the right conjunct).
inline std::vector<Move> third_moves_right(const std::string& v = "w") {
  std::vector<Move> m = third_moves(v);
  m[2] = Move::make_attack(AttackSymbol::and_right(), 2);
  m[3] = Move::make_defence(f("forall x. b(x)"), 3);
  m[7] = Move::make_attack(AttackSymbol::and_right(), 7);
  m[8] = Move::make_defence(f("b(" + v + ")"), 8);
  m[9] = Move::make_defence(f("b(" + v + ")"), 5);
  return m;
}

inline Strategy left_strategy() { return strategy_from_paths(f(kLeft), {left_moves("v0")}); }
inline Strategy middle_strategy() { return strategy_from_paths(f(kMiddle), {middle_moves("v0")}); }
inline Strategy third_strategy() {
  return strategy_from_paths(f(kThird), {third_moves("v0"), third_moves_right("v0")});
}

inline Game play(const char* root, const std::vector<Move>& moves) {
  Game g(parse_formula(root));
  for (const auto& m : moves) g = extend_game(g, m);
  return g;
}

}  // namespace figure
