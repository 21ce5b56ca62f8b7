#include "dialogos/translate.hpp"

#include <algorithm>

namespace dialogos {

namespace {

// What a sequent occurrence stands for in the game being built. Left
// occurrences are O assertions (their move index). A right occurrence is
// either a formula P may assert against the O attack at `index`, a formula P
// asserted at `index`, or an existential whose attack at `index` P may
// answer again.
struct Slot {
  enum Kind { Pending, Asserted, ExistsAttacked } kind;
  std::size_t index;
};

struct Labels {
  std::vector<std::size_t> left;
  std::vector<Slot> right;
};

Game extended(const Game& g, const Move& m) { return extend_game(g, m); }

std::optional<std::size_t> find_right(const Labels& st, const Sequent& seq, Slot::Kind kind, std::size_t index,
                                      const Formula* formula) {
  for (std::size_t k = 0; k < st.right.size(); ++k)
    if (st.right[k].kind == kind && st.right[k].index == index && (!formula || seq.right[k] == *formula))
      return k;
  return std::nullopt;
}

Term instance_term(const Formula& quantified, const Formula& instance) {
  auto m = match_instance(quantified.body(), quantified.bound_var(), instance);
  if (!m) throw TranslationError(render(instance) + " is not an instance of " + render(quantified));
  return m->value_or(Term::var(quantified.bound_var()));
}

// Strategy to derivation, following the O-projection.
class Labeller {
 public:
  explicit Labeller(const Strategy& s) : root_(s.root) {}

  Derivation run(const Strategy& s, ProjectionNode& proj) {
    Game g(root_);
    Sequent seq{{}, {root_}};
    proj.sequent = seq;
    Labels st{{}, {{Slot::Asserted, 0}}};
    NodePath path;
    return asserted(indexed(s.children), g, seq, st, 0, path, proj);
  }

 private:
  using Children = std::vector<std::pair<std::size_t, const StrategyNode*>>;
  Formula root_;

  static Children indexed(const std::vector<StrategyNode>& nodes) {
    Children out;
    for (std::size_t i = 0; i < nodes.size(); ++i) out.emplace_back(i, &nodes[i]);
    return out;
  }

  template <class Pred>
  static std::pair<std::size_t, const StrategyNode*> child(const Children& cs, Pred pred, const char* what) {
    for (const auto& c : cs)
      if (pred(c.second->move)) return c;
    throw NotWinning(std::string("strategy does not cover ") + what);
  }

  static bool is_attack(const Move& m, AttackKind k) { return m.polarity == Polarity::Attack && m.attack->kind == k; }

  // O replied with `onode`, the last move of `g`; `seq` is its label.
  Derivation after_o(std::pair<std::size_t, const StrategyNode*> onode, const Game& g, const Sequent& seq,
                     const Labels& st, NodePath& path, ProjectionNode& parent,
                     std::optional<std::string> chosen = std::nullopt) {
    path.push_back(onode.first);
    parent.children.push_back({onode.second->move, path, seq, std::move(chosen), {}});
    ProjectionNode& here = parent.children.back();
    const auto& replies = onode.second->children;
    if (replies.empty()) throw NotWinning("O move " + render(onode.second->move) + " is left unanswered");
    if (replies.size() > 1) throw TranslationError("P is not deterministic after " + render(onode.second->move));
    Derivation d = p_move({0, &replies[0]}, g, seq, st, path, here);
    path.pop_back();
    return d;
  }

  // P plays `pnode` after the O move ending `g`.
  Derivation p_move(std::pair<std::size_t, const StrategyNode*> pnode, const Game& g, const Sequent& seq,
                    const Labels& st, NodePath& path, ProjectionNode& proj) {
    const Move& m = pnode.second->move;
    std::size_t n = g.size();
    Game g1 = extended(g, m);
    path.push_back(pnode.first);
    Children replies = indexed(pnode.second->children);
    Derivation out;

    if (m.polarity == Polarity::Defence) {
      std::size_t e = *m.enabler;
      if (auto k = find_right(st, seq, Slot::Pending, e, &*m.defence)) {
        Labels st1 = st;
        st1.right[*k] = {Slot::Asserted, n};
        out = asserted(replies, g1, seq, st1, *k, path, proj);
      } else if (auto k = find_right(st, seq, Slot::ExistsAttacked, e, nullptr)) {
        Term t = instance_term(seq.right[*k], *m.defence);
        RuleApplication app{Rule::ExR, {Side::R, *k}, t, {}};
        Sequent prem = rule_premises(seq, app)[0];
        Labels st1 = st;
        st1.right.push_back({Slot::Asserted, n});
        out = {seq, app, {asserted(replies, g1, prem, st1, prem.right.size() - 1, path, proj)}};
      } else {
        throw TranslationError("P defence " + render(m) + " matches no open obligation");
      }
    } else {
      std::size_t j = *m.enabler;
      auto it = std::find(st.left.begin(), st.left.end(), j);
      if (it == st.left.end()) throw TranslationError("P attacks a move that is not an O assertion");
      std::size_t k = static_cast<std::size_t>(it - st.left.begin());
      const Formula& a = seq.left[k];
      auto defence_of = [&](const Formula& f) {
        return [f, n](const Move& r) { return r.polarity == Polarity::Defence && r.enabler == n && *r.defence == f; };
      };
      auto one_defence = [&](Rule rule, const Formula& f, std::optional<Term> t, std::optional<std::string> eigen,
                             std::optional<std::string> chosen) {
        RuleApplication app{rule, {Side::L, k}, t, eigen};
        Sequent prem = rule_premises(seq, app)[0];
        auto c = child(replies, defence_of(f), "O's defence");
        Labels st1 = st;
        st1.left.push_back(n + 1);
        return Derivation{seq, app, {after_o(c, extended(g1, c.second->move), prem, st1, path, proj, chosen)}};
      };
      switch (m.attack->kind) {
        case AttackKind::AndLeft:
          out = one_defence(Rule::AndL1, a.left(), {}, {}, {});
          break;
        case AttackKind::AndRight:
          out = one_defence(Rule::AndL2, a.right(), {}, {}, {});
          break;
        case AttackKind::ForallAt: {
          const Term& t = *m.attack->term;
          out = one_defence(Rule::AllL, instantiate(a, t), t, {}, {});
          break;
        }
        case AttackKind::ExistsQuery: {
          auto c = child(replies, [n](const Move& r) { return r.polarity == Polarity::Defence && r.enabler == n; },
                         "O's existential defence");
          auto picked = match_instance(a.body(), a.bound_var(), *c.second->move.defence);
          std::string eigen;
          if (picked && *picked && (*picked)->is_var()) {
            eigen = (*picked)->name();
          } else {
            auto used = free_variables(seq);
            for (const auto& f : seq.left) collect_names(f, used);
            for (const auto& f : seq.right) collect_names(f, used);
            eigen = first_fresh_variable(used);
          }
          out = one_defence(Rule::ExL, instantiate(a, Term::var(eigen)), {}, eigen, eigen);
          break;
        }
        case AttackKind::OrQuery: {
          RuleApplication app{Rule::OrL, {Side::L, k}, {}, {}};
          auto prems = rule_premises(seq, app);
          std::vector<Derivation> subs;
          ProjectionNode scratch;
          const Formula parts[2] = {a.left(), a.right()};
          for (std::size_t side = 0; side < 2; ++side) {
            auto c = child(replies, defence_of(parts[side]), "O's disjunct");
            Labels st1 = st;
            st1.left.push_back(n + 1);
            // Identical disjuncts share one O move; label it once.
            bool shared = side == 1 && parts[0] == parts[1];
            subs.push_back(
                after_o(c, extended(g1, c.second->move), prems[side], st1, path, shared ? scratch : proj));
          }
          out = {seq, app, std::move(subs)};
          break;
        }
        case AttackKind::FormulaAttack: {
          RuleApplication app{Rule::ImpL, {Side::L, k}, {}, {}};
          auto prems = rule_premises(seq, app);
          Children counter;
          for (const auto& r : replies)
            if (r.second->move.polarity == Polarity::Attack) counter.push_back(r);
          Labels st0 = st;
          st0.right.push_back({Slot::Asserted, n});
          Derivation left = asserted(counter, g1, prems[0], st0, prems[0].right.size() - 1, path, proj);
          auto c = child(replies, defence_of(a.right()), "O's defence of the consequent");
          Labels st1 = st;
          st1.left.push_back(n + 1);
          Derivation right = after_o(c, extended(g1, c.second->move), prems[1], st1, path, proj);
          out = {seq, app, {std::move(left), std::move(right)}};
          break;
        }
      }
    }
    path.pop_back();
    return out;
  }

  static void collect_names(const Formula& f, std::set<std::string>& out) {
    auto names = variable_names(f);
    out.insert(names.begin(), names.end());
  }

  // P has just asserted right occurrence `slot` (the last move of `g`);
  // `replies` are O's attacks on it.
  Derivation asserted(const Children& replies, const Game& g, const Sequent& seq, const Labels& st,
                      std::size_t slot, NodePath& path, ProjectionNode& proj) {
    const Formula& c = seq.right[slot];
    std::size_t n = g.size();  // index of O's reply
    auto attack = [&](AttackKind k) {
      return child(replies, [k](const Move& r) { return is_attack(r, k); }, "an O attack");
    };
    auto single = [&](Rule rule, AttackKind k, std::optional<std::string> eigen, bool left_added) {
      RuleApplication app{rule, {Side::R, slot}, {}, eigen};
      Sequent prem = rule_premises(seq, app)[0];
      auto r = attack(k);
      Labels st1 = st;
      st1.right[slot] = {Slot::Pending, n};
      if (rule == Rule::OrR) st1.right.push_back({Slot::Pending, n});
      if (left_added) st1.left.push_back(n);
      return Derivation{seq, app, {after_o(r, extended(g, r.second->move), prem, st1, path, proj, eigen)}};
    };
    switch (c.kind()) {
      case Connective::Atom:
      case Connective::Bottom:
        return {seq, {Rule::Id, {Side::R, slot}, {}, {}}, {}};
      case Connective::Implies:
        return single(Rule::ImpR, AttackKind::FormulaAttack, {}, true);
      case Connective::Or:
        return single(Rule::OrR, AttackKind::OrQuery, {}, false);
      case Connective::Forall: {
        auto r = attack(AttackKind::ForallAt);
        const Term& v = *r.second->move.attack->term;
        if (!v.is_var()) throw TranslationError("universal attack with a non-variable term");
        return single(Rule::AllR, AttackKind::ForallAt, v.name(), false);
      }
      case Connective::And: {
        RuleApplication app{Rule::AndR, {Side::R, slot}, {}, {}};
        auto prems = rule_premises(seq, app);
        std::vector<Derivation> subs;
        for (auto [k, p] : {std::pair{AttackKind::AndLeft, 0}, std::pair{AttackKind::AndRight, 1}}) {
          auto r = attack(k);
          Labels st1 = st;
          st1.right[slot] = {Slot::Pending, n};
          subs.push_back(after_o(r, extended(g, r.second->move), prems[p], st1, path, proj));
        }
        return {seq, app, std::move(subs)};
      }
      case Connective::Exists: {
        auto r = attack(AttackKind::ExistsQuery);
        Game g1 = extended(g, r.second->move);
        const auto& answers = r.second->children;
        if (answers.size() != 1 || answers[0].move.polarity != Polarity::Defence || answers[0].move.enabler != n)
          throw NotWinning("existential attack is not answered");
        Term t = instance_term(c, *answers[0].move.defence);
        RuleApplication app{Rule::ExR, {Side::R, slot}, t, {}};
        Sequent prem = rule_premises(seq, app)[0];
        Labels st1 = st;
        st1.right[slot] = {Slot::ExistsAttacked, n};
        st1.right.push_back({Slot::Asserted, n + 1});
        path.push_back(r.first);
        proj.children.push_back({r.second->move, path, prem, std::nullopt, {}});
        ProjectionNode& here = proj.children.back();
        path.push_back(0);
        Derivation sub = asserted(indexed(answers[0].children), extended(g1, answers[0].move), prem, st1,
                                  prem.right.size() - 1, path, here);
        path.pop_back();
        path.pop_back();
        return {seq, app, {std::move(sub)}};
      }
    }
    throw TranslationError("unreachable connective");
  }
};

// Derivation to strategy.
class StrategyWriter {
 public:
  explicit StrategyWriter(const Formula& root) : root_vars_(free_variables(root)) {}

  std::vector<StrategyNode> expand(const Derivation& d, const Game& g, const Labels& st, const Substitution& sigma) {
    const ActiveSlot a = d.rule.active;
    std::size_t n = g.size();
    if (a.side == Side::R) {
      const Formula& c = d.conclusion.right[a.index];
      Slot s = st.right[a.index];
      if (s.kind == Slot::Pending) {
        Move m = Move::make_defence(substitute(c, sigma), s.index);
        Labels st1 = st;
        st1.right[a.index] = {Slot::Asserted, n};
        return {{m, expand(d, extended(g, m), st1, sigma)}};
      }
      if (s.kind == Slot::ExistsAttacked) {
        Substitution s1 = bind(*d.rule.term, g, sigma);
        Move m = Move::make_defence(substitute(instantiate(c, *d.rule.term), s1), s.index);
        Labels st1 = premise_labels(d, 0, st, n, {Slot::Asserted, n});
        return {{m, expand(d.premises[0], extended(g, m), st1, s1)}};
      }
      return attacks_on(d, g, st, sigma, s.index);
    }

    std::size_t j = st.left[a.index];
    const Formula& f = d.conclusion.left[a.index];
    auto o_defence = [&](const Formula& content, std::size_t prem, const Substitution& s1, const Game& g1) {
      Move def = Move::make_defence(substitute(content, s1), n);
      Labels st1 = premise_labels(d, prem, st, n + 1, {Slot::Pending, 0});
      return StrategyNode{def, expand(d.premises[prem], extended(g1, def), st1, s1)};
    };
    switch (d.rule.rule) {
      case Rule::AndL1:
      case Rule::AndL2: {
        bool first = d.rule.rule == Rule::AndL1;
        Move m = Move::make_attack(first ? AttackSymbol::and_left() : AttackSymbol::and_right(), j);
        Game g1 = extended(g, m);
        return {{m, {o_defence(first ? f.left() : f.right(), 0, sigma, g1)}}};
      }
      case Rule::OrL: {
        Move m = Move::make_attack(AttackSymbol::or_query(), j);
        Game g1 = extended(g, m);
        std::vector<StrategyNode> kids{o_defence(f.left(), 0, sigma, g1)};
        if (!(f.left() == f.right())) kids.push_back(o_defence(f.right(), 1, sigma, g1));
        return {{m, std::move(kids)}};
      }
      case Rule::AllL: {
        const Term& t = *d.rule.term;
        Substitution s1 = bind(t, g, sigma);
        Move m = Move::make_attack(AttackSymbol::forall_at(substitute(t, s1)), j);
        Game g1 = extended(g, m);
        return {{m, {o_defence(instantiate(f, t), 0, s1, g1)}}};
      }
      case Rule::ExL: {
        Move m = Move::make_attack(AttackSymbol::exists_query(), j);
        Game g1 = extended(g, m);
        Substitution s1 = sigma;
        s1.insert_or_assign(*d.rule.eigen, Term::var(game_fresh_variable(g1)));
        return {{m, {o_defence(instantiate(f, Term::var(*d.rule.eigen)), 0, s1, g1)}}};
      }
      case Rule::ImpL: {
        Move m = Move::make_attack(AttackSymbol::formula_attack(substitute(f.left(), sigma)), j);
        Game g1 = extended(g, m);
        Labels st0 = premise_labels(d, 0, st, 0, {Slot::Asserted, n});
        std::vector<StrategyNode> kids = expand(d.premises[0], g1, st0, sigma);
        kids.push_back(o_defence(f.right(), 1, sigma, g1));
        return {{m, std::move(kids)}};
      }
      default:
        throw TranslationError(std::string("unexpected left rule ") + to_string(d.rule.rule));
    }
  }

 private:
  std::set<std::string> root_vars_;

  // O's attacks on the formula P asserted at index k (the last move of g).
  std::vector<StrategyNode> attacks_on(const Derivation& d, const Game& g, const Labels& st,
                                       const Substitution& sigma, std::size_t k) {
    std::size_t n = g.size();
    const Formula& c = d.conclusion.right[d.rule.active.index];
    auto reply = [&](const AttackSymbol& sym, std::size_t prem, const Substitution& s1) {
      Move m = Move::make_attack(sym, k);
      Labels st1 = premise_labels(d, prem, st, n, {Slot::Pending, n});
      return StrategyNode{m, expand(d.premises[prem], extended(g, m), st1, s1)};
    };
    switch (d.rule.rule) {
      case Rule::Id:
        return {};
      case Rule::ImpR:
        return {reply(AttackSymbol::formula_attack(substitute(c.left(), sigma)), 0, sigma)};
      case Rule::AndR:
        return {reply(AttackSymbol::and_left(), 0, sigma), reply(AttackSymbol::and_right(), 1, sigma)};
      case Rule::OrR:
        return {reply(AttackSymbol::or_query(), 0, sigma)};
      case Rule::AllR: {
        Term v = Term::var(game_fresh_variable(g));
        Substitution s1 = sigma;
        s1.insert_or_assign(*d.rule.eigen, v);
        return {reply(AttackSymbol::forall_at(v), 0, s1)};
      }
      case Rule::ExR: {
        Move q = Move::make_attack(AttackSymbol::exists_query(), k);
        Game g1 = extended(g, q);
        Substitution s1 = bind(*d.rule.term, g1, sigma);
        Move def = Move::make_defence(substitute(instantiate(c, *d.rule.term), s1), n);
        Labels st1 = premise_labels(d, 0, st, 0, {Slot::Asserted, n + 1});
        // The retained existential now waits on O's query.
        auto origins = premise_origins(d, 0);
        for (std::size_t i = 0; i < origins->right.size(); ++i)
          if (origins->right[i] == d.rule.active.index) st1.right[i] = {Slot::ExistsAttacked, n};
        return {{q, {{def, expand(d.premises[0], extended(g1, def), st1, s1)}}}};
      }
      default:
        throw TranslationError(std::string("unexpected right rule ") + to_string(d.rule.rule));
    }
  }

  // Labels of premise `k`: copied occurrences keep theirs, new left ones get
  // `left_new`, new right ones get `right_new`.
  static Labels premise_labels(const Derivation& d, std::size_t k, const Labels& st, std::size_t left_new,
                               Slot right_new) {
    auto origins = premise_origins(d, k);
    if (!origins) throw TranslationError("cannot relate premise to conclusion at " + render(d.conclusion));
    Labels out;
    for (const auto& o : origins->left) out.left.push_back(o ? st.left[*o] : left_new);
    for (const auto& o : origins->right) out.right.push_back(o ? st.right[*o] : right_new);
    return out;
  }

  // Gives every variable of an instantiation term that is new to this branch
  // a name unused in the game.
  Substitution bind(const Term& t, const Game& g, const Substitution& sigma) const {
    Substitution out = sigma;
    auto used = game_variable_names(g);
    for (const auto& [from, to] : sigma) collect_variable_names(to, used);
    for (const auto& v : free_variables(t)) {
      if (out.count(v) || root_vars_.count(v)) continue;
      std::string name = first_fresh_variable(used);
      used.insert(name);
      out.emplace(v, Term::var(name));
    }
    return out;
  }
};

bool exr_strategic(const Derivation& d) {
  auto o = premise_origins(d, 0);
  const auto& p = d.premises[0];
  return o && p.rule.active.side == Side::R && p.rule.active.index < o->right.size() &&
         !o->right[p.rule.active.index];
}

Derivation push_up(const Derivation& e);

Derivation fix_existentials(const Derivation& d) {
  Derivation out = d;
  for (auto& p : out.premises) p = fix_existentials(p);
  if (out.rule.rule == Rule::ExR && !exr_strategic(out)) return push_up(out);
  return out;
}

// Moves a non-strategic ExR above the rule applied to its premise.
Derivation push_up(const Derivation& e) {
  const Derivation& p = e.premises[0];
  auto origins = premise_origins(e, 0);
  if (!origins || p.rule.rule == Rule::ImpL) return e;
  const auto& side_origins = p.rule.active.side == Side::L ? origins->left : origins->right;
  if (p.rule.active.index >= side_origins.size() || !side_origins[p.rule.active.index]) return e;
  RuleApplication app = p.rule;
  app.active.index = *side_origins[p.rule.active.index];
  if (app.rule == Rule::Id) return {e.conclusion, app, {}};
  std::vector<Sequent> qs;
  try {
    qs = rule_premises(e.conclusion, app);
  } catch (const RuleMismatch&) {
    return e;
  }
  if (qs.size() != p.premises.size()) return e;
  const Formula& ex = e.conclusion.right[e.rule.active.index];
  std::vector<Derivation> subs;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    auto it = std::find(qs[k].right.begin(), qs[k].right.end(), ex);
    if (it == qs[k].right.end()) return e;
    RuleApplication exr{Rule::ExR, {Side::R, static_cast<std::size_t>(it - qs[k].right.begin())}, e.rule.term, {}};
    Derivation node{qs[k], exr, {p.premises[k]}};
    if (!(rule_premises(qs[k], exr)[0] == p.premises[k].conclusion)) return e;
    subs.push_back(exr_strategic(node) ? node : push_up(node));
  }
  return {e.conclusion, app, std::move(subs)};
}

void harvest_terms(const Derivation& d, std::vector<Term>& out) {
  if (d.rule.term && std::find(out.begin(), out.end(), *d.rule.term) == out.end()) out.push_back(*d.rule.term);
  for (const auto& p : d.premises) harvest_terms(p, out);
}

void check_lemma(const ProjectionNode& node, LemmaReport& rep) {
  for (const auto& c : node.children) {
    if (!rep.ok) return;
    if (c.chosen_variable) {
      ++rep.checked;
      if (free_variables(node.sequent).count(*c.chosen_variable)) {
        rep.ok = false;
        rep.strategy_path = c.strategy_path;
        rep.message = *c.chosen_variable + " is free in " + render(node.sequent);
        return;
      }
    }
    check_lemma(c, rep);
  }
}

}  // namespace

OProjection label_sequents(const Strategy& s) {
  ProjectionNode root;
  Labeller(s).run(s, root);
  return root;
}

Derivation strategy_to_derivation(const Strategy& s) {
  ProjectionNode root;
  Derivation d = Labeller(s).run(s, root);
  auto rep = validate_derivation(d);
  if (!rep.ok) throw TranslationError("labelling produced an invalid derivation: " + rep.message);
  return d;
}

LemmaReport check_fresh_variable_lemma(const OProjection& p) {
  LemmaReport rep;
  check_lemma(p, rep);
  return rep;
}

Strategy derivation_to_strategy(const Derivation& d) {
  if (!d.conclusion.left.empty() || d.conclusion.right.size() != 1)
    throw NotSingleConclusion("conclusion " + render(d.conclusion) + " is not of the form |- F");
  auto v = validate_derivation(d);
  if (!v.ok) throw InvalidDerivation(v.message);
  auto st = is_strategic(d);
  if (!st.strategic) throw NotStrategic(st.message + " at " + render(st.path));
  const Formula& root = d.conclusion.right[0];
  Game g(root);
  Labels labels{{}, {{Slot::Asserted, 0}}};
  Strategy s{root, StrategyWriter(root).expand(d, g, labels, {})};
  auto rep = validate_strategy(s);
  if (!rep.ok) throw TranslationError("translation produced an invalid strategy: " + rep.message);
  return s;
}

Derivation strategize(const Derivation& d, const SearchLimits& limits) {
  auto v = validate_derivation(d);
  if (!v.ok) throw InvalidDerivation(v.message);
  if (is_strategic(d).strategic) return d;
  Derivation local = fix_existentials(d);
  if (validate_derivation(local).ok && is_strategic(local).strategic && local.conclusion == d.conclusion)
    return local;
  ProveOptions options;
  harvest_terms(d, options.seed_terms);
  auto proved = prove(d.conclusion, limits, options);
  if (!proved) throw StrategizationFailed("no strategic derivation of " + render(d.conclusion) + " within bounds");
  return *proved;
}

}  // namespace dialogos
