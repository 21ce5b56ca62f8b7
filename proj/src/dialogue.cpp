#include "dialogos/dialogue.hpp"

#include <algorithm>
#include <sstream>

namespace dialogos {

bool operator==(const AttackSymbol& a, const AttackSymbol& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == AttackKind::ForallAt) return *a.term == *b.term;
  if (a.kind == AttackKind::FormulaAttack) return *a.formula == *b.formula;
  return true;
}

std::optional<Formula> Move::asserted() const {
  if (polarity == Polarity::Defence) return defence;
  if (attack && attack->kind == AttackKind::FormulaAttack) return attack->formula;
  return std::nullopt;
}

bool operator==(const Move& a, const Move& b) {
  if (a.polarity != b.polarity || a.enabler != b.enabler) return false;
  if (a.polarity == Polarity::Attack) return *a.attack == *b.attack;
  return *a.defence == *b.defence;
}

Game::Game(Formula f) : root(f) {
  moves.push_back({Polarity::Defence, std::nullopt, std::move(f), std::nullopt});
}

const char* to_string(IllegalReason r) {
  switch (r) {
    case IllegalReason::Parity: return "parity";
    case IllegalReason::Enabler: return "enabler";
    case IllegalReason::Justification: return "justification";
    case IllegalReason::AtomNotReprise: return "atom-not-reprise";
    case IllegalReason::DuplicateDefence: return "duplicate-defence";
  }
  return "?";
}

const char* to_string(Winner w) {
  switch (w) {
    case Winner::P: return "P";
    case Winner::O: return "O";
    case Winner::Open: return "Open";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Attack table

std::vector<AttackSymbol> attack_options(const Formula& f, const std::vector<Term>& universe) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Bottom:
      throw AtomNotAttackable("atomic formula " + render(f) + " cannot be attacked");
    case Connective::Implies:
      return {AttackSymbol::formula_attack(f.left())};
    case Connective::And:
      return {AttackSymbol::and_left(), AttackSymbol::and_right()};
    case Connective::Or:
      return {AttackSymbol::or_query()};
    case Connective::Exists:
      return {AttackSymbol::exists_query()};
    case Connective::Forall: {
      std::vector<AttackSymbol> out;
      for (const auto& t : universe) out.push_back(AttackSymbol::forall_at(t));
      return out;
    }
  }
  return {};
}

namespace {

bool attack_matches(const Formula& f, const AttackSymbol& a) {
  switch (a.kind) {
    case AttackKind::AndLeft:
    case AttackKind::AndRight: return f.kind() == Connective::And;
    case AttackKind::OrQuery: return f.kind() == Connective::Or;
    case AttackKind::ForallAt: return f.kind() == Connective::Forall && a.term.has_value();
    case AttackKind::ExistsQuery: return f.kind() == Connective::Exists;
    case AttackKind::FormulaAttack:
      return f.kind() == Connective::Implies && a.formula && *a.formula == f.left();
  }
  return false;
}

}  // namespace

std::vector<Formula> defence_options(const Formula& asserted, const AttackSymbol& attack,
                                     const std::vector<Term>& universe) {
  if (!attack_matches(asserted, attack))
    throw MismatchedAttack(render(attack) + " does not attack " + render(asserted));
  switch (attack.kind) {
    case AttackKind::AndLeft: return {asserted.left()};
    case AttackKind::AndRight: return {asserted.right()};
    case AttackKind::OrQuery: return {asserted.left(), asserted.right()};
    case AttackKind::ForallAt: return {instantiate(asserted, *attack.term)};
    case AttackKind::FormulaAttack: return {asserted.right()};
    case AttackKind::ExistsQuery: {
      std::vector<Formula> out;
      for (const auto& t : universe) {
        Formula inst = instantiate(asserted, t);
        if (std::find(out.begin(), out.end(), inst) == out.end()) out.push_back(inst);
      }
      return out;
    }
  }
  return {};
}

namespace {

// Whether `content` is a legal defence against `attack` on `asserted`, and
// how many distinct occurrences it may stand for (two for a disjunction of
// alpha-equal disjuncts).
std::size_t defence_multiplicity(const Formula& asserted, const AttackSymbol& attack,
                                 const Formula& content) {
  if (!attack_matches(asserted, attack)) return 0;
  switch (attack.kind) {
    case AttackKind::AndLeft: return content == asserted.left() ? 1 : 0;
    case AttackKind::AndRight: return content == asserted.right() ? 1 : 0;
    case AttackKind::OrQuery:
      return (content == asserted.left() ? 1 : 0) + (content == asserted.right() ? 1 : 0);
    case AttackKind::ForallAt: return content == instantiate(asserted, *attack.term) ? 1 : 0;
    case AttackKind::FormulaAttack: return content == asserted.right() ? 1 : 0;
    case AttackKind::ExistsQuery:
      return match_instance(asserted.body(), asserted.bound_var(), content) ? 1 : 0;
  }
  return 0;
}

using Verdict = std::optional<std::pair<IllegalReason, std::string>>;

Verdict fail(IllegalReason r, std::string detail) { return std::make_pair(r, std::move(detail)); }

}  // namespace

Verdict check_move(const Game& g, const Move& m) {
  const std::size_t i = g.size();
  const Player who = player_of(i);
  if ((m.polarity == Polarity::Attack) != m.attack.has_value() ||
      (m.polarity == Polarity::Defence) != m.defence.has_value())
    return fail(IllegalReason::Justification, "malformed move");
  if (!m.enabler) return fail(IllegalReason::Enabler, "missing enabler");
  const std::size_t e = *m.enabler;
  if (e >= i) return fail(IllegalReason::Enabler, "enabler must precede the move");
  if (who == Player::O && e != i - 1)
    return fail(IllegalReason::Enabler, "an O-move must answer the immediately preceding move");
  if (who == Player::P && e % 2 == 0)
    return fail(IllegalReason::Enabler, "a P-move must answer an O-move");

  const Move& target = g.moves[e];
  if (m.polarity == Polarity::Attack) {
    auto a = target.asserted();
    if (!a) return fail(IllegalReason::Justification, "the enabler asserts no formula");
    if (a->is_atomic()) return fail(IllegalReason::Justification, "atoms cannot be attacked");
    if (!attack_matches(*a, *m.attack))
      return fail(IllegalReason::Justification, render(*m.attack) + " does not attack " + render(*a));
  } else {
    if (target.polarity != Polarity::Attack)
      return fail(IllegalReason::Justification, "a defence must answer an attack");
    auto a = g.moves[*target.enabler].asserted();
    std::size_t mult = a ? defence_multiplicity(*a, *target.attack, *m.defence) : 0;
    if (mult == 0)
      return fail(IllegalReason::Justification,
                  render(*m.defence) + " does not defend against " + render(*target.attack));
    if (who == Player::P) {
      std::size_t earlier = 0;
      for (std::size_t k = 2; k < i; k += 2) {
        const Move& prev = g.moves[k];
        if (prev.polarity == Polarity::Defence && prev.enabler == e && *prev.defence == *m.defence)
          ++earlier;
      }
      if (earlier >= mult)
        return fail(IllegalReason::DuplicateDefence,
                    render(*m.defence) + " was already defended against move " + std::to_string(e));
    }
  }

  if (who == Player::P) {
    auto a = m.asserted();
    if (a && a->is_atomic()) {
      bool reprise = false;
      for (std::size_t k = 1; k < i && !reprise; k += 2) {
        auto o = g.moves[k].asserted();
        reprise = o && *o == *a;
      }
      if (!reprise)
        return fail(IllegalReason::AtomNotReprise, render(*a) + " has not been asserted by O");
    }
  }
  return std::nullopt;
}

Game extend_game(const Game& g, const Move& m) {
  if (auto bad = check_move(g, m)) throw IllegalMove(bad->first, bad->second);
  Game out = g;
  out.moves.push_back(m);
  return out;
}

Game extend_game(const Game& g, const MoveDescriptor& d) {
  if (d.player != g.next_player())
    throw IllegalMove(IllegalReason::Parity, "it is not this player's turn");
  return extend_game(g, d.move);
}

std::optional<std::string> validate_game(const Game& g) {
  if (g.moves.empty()) return "empty game";
  const Move& m0 = g.moves[0];
  if (m0.polarity != Polarity::Defence || m0.enabler || !(*m0.defence == g.root))
    return "the first move must assert the root formula";
  Game prefix(g.root);
  for (std::size_t i = 1; i < g.moves.size(); ++i) {
    if (auto bad = check_move(prefix, g.moves[i]))
      return "move " + std::to_string(i) + ": " + to_string(bad->first) + ": " + bad->second;
    prefix.moves.push_back(g.moves[i]);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Terms and variables of a game

std::vector<Term> game_terms(const Game& g) {
  std::vector<Term> out;
  for (const auto& m : g.moves) {
    if (auto a = m.asserted()) collect_free_subterms(*a, out);
    if (m.attack && m.attack->kind == AttackKind::ForallAt) collect_subterms(*m.attack->term, out);
  }
  return out;
}

std::set<std::string> game_variable_names(const Game& g) {
  std::set<std::string> out;
  for (const auto& m : g.moves) {
    if (auto a = m.asserted()) {
      auto vs = variable_names(*a);
      out.insert(vs.begin(), vs.end());
    }
    if (m.attack && m.attack->kind == AttackKind::ForallAt) collect_variable_names(*m.attack->term, out);
  }
  return out;
}

std::string game_fresh_variable(const Game& g) { return first_fresh_variable(game_variable_names(g)); }

std::vector<Term> default_universe(const Game& g) {
  auto terms = game_terms(g);
  if (terms.empty()) terms.push_back(Term::var(game_fresh_variable(g)));
  return terms;
}

std::vector<MoveDescriptor> legal_moves(const Game& g, const std::vector<Term>& universe,
                                        bool open_terms) {
  const std::size_t i = g.size();
  const Player who = player_of(i);
  std::vector<Term> terms = universe;
  Term fresh = Term::var(game_fresh_variable(g));
  if (std::find(terms.begin(), terms.end(), fresh) == terms.end()) terms.push_back(fresh);
  const std::vector<Term> placeholder{fresh};

  std::vector<MoveDescriptor> out;
  auto consider = [&](Move m, bool open) {
    if (check_move(g, m)) return;
    for (const auto& d : out)
      if (d.move == m) return;
    out.push_back({who, std::move(m), open});
  };

  std::vector<std::size_t> enablers;
  if (who == Player::O) {
    enablers.push_back(i - 1);
  } else {
    for (std::size_t k = 1; k < i; k += 2) enablers.push_back(k);
  }

  for (std::size_t e : enablers) {
    const Move& target = g.moves[e];
    if (auto a = target.asserted(); a && !a->is_atomic()) {
      bool open = open_terms && a->kind() == Connective::Forall;
      for (auto& sym : attack_options(*a, open ? placeholder : terms))
        consider(Move::make_attack(std::move(sym), e), open);
    }
    if (target.polarity == Polarity::Attack) {
      auto a = g.moves[*target.enabler].asserted();
      if (!a) continue;
      bool open = open_terms && target.attack->kind == AttackKind::ExistsQuery;
      for (auto& f : defence_options(*a, *target.attack, open ? placeholder : terms))
        consider(Move::make_defence(std::move(f), e), open);
    }
  }
  return out;
}

Move instantiate_descriptor(const Game& g, const MoveDescriptor& d, const Term& t) {
  if (!d.open_term) return d.move;
  Move m = d.move;
  if (m.polarity == Polarity::Attack) {
    m.attack->term = t;
  } else {
    const Move& attack = g.moves[*m.enabler];
    m.defence = instantiate(*g.moves[*attack.enabler].asserted(), t);
  }
  return m;
}

Winner game_winner(const Game& g, const std::vector<Term>& universe) {
  bool empty = legal_moves(g, universe).empty();
  if (!empty) return Winner::Open;
  return g.size() % 2 == 1 ? Winner::P : Winner::O;
}

// ---------------------------------------------------------------------------
// Propositions 1 to 3

namespace {

struct Origin {
  OccurrencePath path;
  std::vector<std::string> binders;  // names bound along the path
  bool positive;
};

}  // namespace

PropositionReport check_propositions(const Game& g) {
  PropositionReport report;
  auto table = polarity_table(g.root);

  if (game_winner(g, default_universe(g)) == Winner::P) {
    auto last = g.moves.back().asserted();
    if (!last || !last->is_atomic()) {
      report.prop1 = false;
      report.violations.push_back("P won but the last move asserts no atom");
    }
  }

  std::vector<std::optional<Origin>> origin(g.size());
  origin[0] = Origin{{}, {}, true};
  for (std::size_t i = 1; i < g.size(); ++i) {
    const Move& m = g.moves[i];
    const Move& target = g.moves[*m.enabler];
    std::optional<Origin> o;
    if (m.polarity == Polarity::Attack) {
      if (m.attack->kind == AttackKind::FormulaAttack && origin[*m.enabler]) {
        o = origin[*m.enabler];
        o->path.push_back(Step::Left);
        o->positive = !o->positive;
      }
    } else {
      std::size_t asserter = *target.enabler;
      if (!origin[asserter]) continue;
      o = origin[asserter];
      auto a = *g.moves[asserter].asserted();
      switch (target.attack->kind) {
        case AttackKind::AndLeft: o->path.push_back(Step::Left); break;
        case AttackKind::AndRight:
        case AttackKind::FormulaAttack: o->path.push_back(Step::Right); break;
        case AttackKind::OrQuery:
          o->path.push_back(*m.defence == a.left() ? Step::Left : Step::Right);
          break;
        case AttackKind::ForallAt:
        case AttackKind::ExistsQuery:
          o->binders.push_back(a.bound_var());
          o->path.push_back(Step::Body);
          break;
      }
    }
    origin[i] = o;
  }

  for (std::size_t i = 0; i < g.size(); ++i) {
    auto a = g.moves[i].asserted();
    if (!a) continue;
    const bool by_p = player_of(i) == Player::P;
    std::ostringstream who;
    who << "move " << i << " (" << render(*a) << ")";
    const auto& o = origin[i];
    if (!o || o->positive != by_p) {
      report.prop2 = false;
      report.violations.push_back(who.str() + " has the wrong occurrence sign");
    } else {
      auto sub = subformula_at(g.root, o->path);
      std::set<std::string> pv(o->binders.begin(), o->binders.end());
      if (!sub || !match_pattern(*sub, pv, *a)) {
        report.prop2 = false;
        report.violations.push_back(who.str() + " is not an instance of its root occurrence");
      }
    }
    for (const auto& occ : atom_occurrences(*a)) {
      bool sign = occ.positive == by_p;
      const auto& e = table[occ.atom.predicate()];
      if (!(sign ? e.positive : e.negative)) {
        report.prop2 = false;
        report.violations.push_back(who.str() + " mentions " + occ.atom.predicate() +
                                    " with a polarity absent from the root");
      }
    }
    if (by_p && a->is_atomic() && !table[a->predicate()].both()) {
      report.prop3 = false;
      report.violations.push_back(who.str() + " asserts an atom whose predicate is not both-polar");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render(const AttackSymbol& a) {
  switch (a.kind) {
    case AttackKind::AndLeft: return "?&1";
    case AttackKind::AndRight: return "?&2";
    case AttackKind::OrQuery: return "?|";
    case AttackKind::ForallAt: return "?forall[" + render(*a.term) + "]";
    case AttackKind::ExistsQuery: return "?exists";
    case AttackKind::FormulaAttack: return "?" + render(*a.formula);
  }
  return "?";
}

std::string render(const Move& m) {
  std::string body = m.polarity == Polarity::Attack ? render(*m.attack) : "!" + render(*m.defence);
  if (m.enabler) body += " -> " + std::to_string(*m.enabler);
  return body;
}

}  // namespace dialogos
