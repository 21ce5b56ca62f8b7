#include "dialogos/strategy.hpp"

#include <algorithm>
#include <map>

#include "dialogos/translate.hpp"

namespace dialogos {

namespace {

std::size_t count_nodes(const std::vector<StrategyNode>& nodes) {
  std::size_t n = 0;
  for (const auto& c : nodes) n += 1 + count_nodes(c.children);
  return n;
}

void collect_games(const std::vector<StrategyNode>& nodes, const Game& g, std::vector<Game>& out) {
  if (nodes.empty()) {
    out.push_back(g);
    return;
  }
  for (const auto& c : nodes) {
    Game next = g;
    next.moves.push_back(c.move);
    collect_games(c.children, next, out);
  }
}

bool is_forall_attack(const Move& m) {
  return m.polarity == Polarity::Attack && m.attack->kind == AttackKind::ForallAt;
}

bool is_exists_attack(const Move& m) {
  return m.polarity == Polarity::Attack && m.attack->kind == AttackKind::ExistsQuery;
}

// The P moves after which O's replies need not be exhaustive.
bool exempt_from_coverage(const Move& p_move) {
  if (is_exists_attack(p_move)) return true;
  auto a = p_move.asserted();
  return a && a->kind() == Connective::Forall;
}

struct Validator {
  StrategyReport rep;
  NodePath path;

  void fail(int condition, const std::string& msg) {
    rep.ok = false;
    rep.condition = condition;
    rep.path = path;
    rep.message = msg;
  }

  // `g` ends with the move whose replies are `children`.
  void visit(const std::vector<StrategyNode>& children, const Game& g) {
    std::size_t last = g.size() - 1;
    const Move& m = g.moves.back();
    for (std::size_t i = 0; i < children.size() && rep.ok; ++i) {
      path.push_back(i);
      if (auto bad = check_move(g, children[i].move))
        fail(0, std::string("illegal move ") + render(children[i].move) + ": " + to_string(bad->first) +
                    " (" + bad->second + ")");
      path.pop_back();
    }
    if (!rep.ok) return;

    if (player_of(last) == Player::P) {
      std::string fresh = game_fresh_variable(g);
      Term fresh_term = Term::var(fresh);
      for (std::size_t i = 0; i < children.size() && rep.ok; ++i) {
        const Move& c = children[i].move;
        path.push_back(i);
        if (is_forall_attack(c) && !(*c.attack->term == fresh_term)) {
          fail(3, "universal attack uses " + render(*c.attack->term) + " instead of " + fresh);
        } else if (c.polarity == Polarity::Defence && is_exists_attack(g.moves[*c.enabler])) {
          const Move& query = g.moves[*c.enabler];
          Formula attacked = *g.moves[*query.enabler].asserted();
          if (!(*c.defence == instantiate(attacked, fresh_term)))
            fail(4, "existential defence " + render(*c.defence) + " does not use " + fresh);
        }
        for (std::size_t j = 0; j < i && rep.ok; ++j)
          if (children[j].move == c) fail(1, "duplicate O move " + render(c));
        path.pop_back();
      }
      if (!rep.ok) return;
      if (!exempt_from_coverage(m)) {
        for (const auto& d : legal_moves(g, {})) {
          bool present = std::any_of(children.begin(), children.end(),
                                     [&](const StrategyNode& c) { return c.move == d.move; });
          if (!present) return fail(1, "O move " + render(d.move) + " is not covered");
        }
      }
    } else {
      if (children.size() > 1) return fail(2, "O move is followed by several P moves");
      if (is_exists_attack(m)) {
        bool answered = !children.empty() && children[0].move.polarity == Polarity::Defence &&
                        children[0].move.enabler == last;
        if (!answered) return fail(5, "existential attack is not answered by a P defence");
      }
    }

    for (std::size_t i = 0; i < children.size() && rep.ok; ++i) {
      path.push_back(i);
      Game next = g;
      next.moves.push_back(children[i].move);
      visit(children[i].children, next);
      path.pop_back();
    }
  }
};

bool all_leaves_won(const std::vector<StrategyNode>& children, const Game& g) {
  if (children.empty()) return game_winner(g, default_universe(g)) == Winner::P;
  for (const auto& c : children) {
    Game next = g;
    next.moves.push_back(c.move);
    if (!all_leaves_won(c.children, next)) return false;
  }
  return true;
}

std::set<std::string> move_variables(const Move& m) {
  std::set<std::string> out;
  if (auto a = m.asserted()) out = free_variables(*a);
  if (m.attack && m.attack->term) collect_variable_names(*m.attack->term, out);
  return out;
}

// Renames, along each path, every variable not free in the root to a
// positional placeholder, then sorts sibling forms.
std::string canonical_nodes(const std::vector<StrategyNode>& nodes, const std::set<std::string>& root_vars,
                            const Substitution& renaming) {
  std::vector<std::string> forms;
  for (const auto& n : nodes) {
    Substitution local = renaming;
    for (const auto& v : move_variables(n.move)) {
      if (root_vars.count(v) || local.count(v)) continue;
      local.emplace(v, Term::var("_" + std::to_string(local.size())));
    }
    Move m = n.move;
    if (m.defence) m.defence = substitute(*m.defence, local);
    if (m.attack && m.attack->formula) m.attack->formula = substitute(*m.attack->formula, local);
    if (m.attack && m.attack->term) m.attack->term = substitute(*m.attack->term, local);
    forms.push_back("(" + render(m) + canonical_nodes(n.children, root_vars, local) + ")");
  }
  std::sort(forms.begin(), forms.end());
  std::string out = "[";
  for (const auto& f : forms) out += f;
  return out + "]";
}

void insert_path(std::vector<StrategyNode>& nodes, const std::vector<Move>& moves, std::size_t k) {
  if (k == moves.size()) return;
  for (auto& n : nodes)
    if (n.move == moves[k]) return insert_path(n.children, moves, k + 1);
  nodes.push_back({moves[k], {}});
  insert_path(nodes.back().children, moves, k + 1);
}

}  // namespace

std::size_t Strategy::size() const { return 1 + count_nodes(children); }

Strategy strategy_from_paths(const Formula& root, const std::vector<std::vector<Move>>& paths) {
  Strategy s{root, {}};
  for (const auto& p : paths) insert_path(s.children, p, 0);
  return s;
}

std::vector<Game> strategy_games(const Strategy& s) {
  std::vector<Game> out;
  collect_games(s.children, Game(s.root), out);
  return out;
}

StrategyReport validate_strategy(const Strategy& s) {
  Validator v;
  v.visit(s.children, Game(s.root));
  return v.rep;
}

bool is_winning(const Strategy& s) {
  return validate_strategy(s).ok && all_leaves_won(s.children, Game(s.root));
}

std::optional<Strategy> find_winning_strategy(const Formula& f, const SearchLimits& limits) {
  auto d = prove(Sequent{{}, {f}}, limits);
  if (!d) return std::nullopt;
  return derivation_to_strategy(*d);
}

std::string canonical_form(const Strategy& s) {
  auto root_vars = free_variables(s.root);
  return render(s.root) + canonical_nodes(s.children, root_vars, {});
}

bool isomorphic(const Strategy& a, const Strategy& b) {
  if (!(a.root == b.root)) return false;
  auto vars = free_variables(a.root);
  return canonical_nodes(a.children, vars, {}) == canonical_nodes(b.children, vars, {});
}

}  // namespace dialogos
