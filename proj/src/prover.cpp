// Backward strategic proof search for GKK.
//
// Invertible steps run eagerly; only ImpL with a compound antecedent and the
// quantifier instantiations AllL/ExR are real choice points. A focus
// obligation carries the strategic constraint: the next rule must act on the
// focused right occurrence.

#include <algorithm>
#include <chrono>
#include <unordered_map>
#include <unordered_set>

#include "dialogos/gkk.hpp"

namespace dialogos {

namespace {

using Clock = std::chrono::steady_clock;

bool contains(const std::vector<Formula>& side, const Formula& f) {
  return std::find(side.begin(), side.end(), f) != side.end();
}

std::string fresh_for(const Sequent& s) {
  std::set<std::string> used;
  for (const auto* side : {&s.left, &s.right})
    for (const auto& f : *side) {
      auto vs = variable_names(f);
      used.insert(vs.begin(), vs.end());
    }
  return first_fresh_variable(used);
}

struct Branch {
  std::unordered_map<std::size_t, std::size_t> instances;  // formula hash -> count
  std::unordered_set<std::size_t> exl_done;
  std::unordered_set<std::size_t> impl_done;
  // (existential, instance) pairs already introduced: in a game P may answer
  // an existential query only once per witness.
  std::unordered_set<std::size_t> witnesses;
  std::vector<std::size_t> ancestors;  // set-normalized sequent keys
};

std::size_t witness_key(const Formula& ex, const Term& t) {
  return ex.hash() * 1000003u ^ instantiate(ex, t).hash();
}

std::size_t sequent_key(const Sequent& s) {
  auto side_hashes = [](const std::vector<Formula>& v) {
    std::vector<std::size_t> h;
    for (const auto& f : v) h.push_back(f.hash());
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    return h;
  };
  std::size_t key = 0x12345;
  for (auto h : side_hashes(s.left)) key = key * 1000003u ^ h;
  key = key * 1000003u ^ 0xabcdef;
  for (auto h : side_hashes(s.right)) key = key * 1000003u ^ h;
  return key;
}

class Search {
 public:
  Search(const SearchLimits& limits, const ProveOptions& options, Clock::time_point deadline)
      : limits_(limits), options_(options), deadline_(deadline) {}

  std::optional<Derivation> run(const Sequent& s, std::size_t depth, std::size_t fresh) {
    depth_ = depth;
    fresh_ = fresh;
    hit_cutoff_ = false;
    used_terms_ = false;
    Branch b;
    return search(s, std::nullopt, depth, b);
  }

  bool hit_cutoff() const { return hit_cutoff_; }
  bool used_terms() const { return used_terms_; }

 private:
  void tick() {
    if (++nodes_ % 1024 == 0 && Clock::now() > deadline_) throw TimeBudgetExceeded();
  }

  std::vector<Term> universe(const Sequent& s) const {
    auto u = term_universe(s, fresh_);
    for (const auto& t : options_.seed_terms)
      if (std::find(u.begin(), u.end(), t) == u.end()) u.push_back(t);
    return u;
  }

  static Derivation leaf(const Sequent& s, RuleApplication app) { return {s, std::move(app), {}}; }

  // Applies `app` and proves every premise; `focus_of` names the focused
  // right slot for a premise (or none).
  template <class FocusFn>
  std::optional<Derivation> apply(const Sequent& s, const RuleApplication& app, std::size_t depth,
                                  const Branch& b, FocusFn focus_of) {
    auto premises = rule_premises(s, app);
    Derivation d{s, app, {}};
    for (std::size_t k = 0; k < premises.size(); ++k) {
      Branch nb = b;
      auto sub = search(premises[k], focus_of(k, premises[k]), depth - 1, nb);
      if (!sub) return std::nullopt;
      d.premises.push_back(std::move(*sub));
    }
    return d;
  }

  static std::optional<std::size_t> no_focus(std::size_t, const Sequent&) { return std::nullopt; }

  std::optional<Derivation> search(const Sequent& s, std::optional<std::size_t> focus,
                                   std::size_t depth, Branch& b) {
    tick();
    if (focus) return focused(s, *focus, depth, b);

    // Axiom.
    for (std::size_t i = 0; i < s.right.size(); ++i)
      if (s.right[i].is_atomic() && contains(s.left, s.right[i]))
        return leaf(s, {Rule::Id, {Side::R, i}, {}, {}});
    if (depth == 0) {
      hit_cutoff_ = true;
      return std::nullopt;
    }
    if (auto d = existential_closure(s, depth, b)) return d;

    // Invertible right rules.
    for (std::size_t i = 0; i < s.right.size(); ++i) {
      const Formula& f = s.right[i];
      std::optional<Rule> r;
      switch (f.kind()) {
        case Connective::Implies: r = Rule::ImpR; break;
        case Connective::Or: r = Rule::OrR; break;
        case Connective::And: r = Rule::AndR; break;
        case Connective::Forall: r = Rule::AllR; break;
        default: break;
      }
      if (!r) continue;
      RuleApplication app{*r, {Side::R, i}, {}, {}};
      if (*r == Rule::AllR) app.eigen = fresh_for(s);
      return apply(s, app, depth, b, no_focus);
    }

    // Left rules that only add information.
    for (std::size_t i = 0; i < s.left.size(); ++i) {
      const Formula& f = s.left[i];
      switch (f.kind()) {
        case Connective::And:
          if (!contains(s.left, f.left()))
            return apply(s, {Rule::AndL1, {Side::L, i}, {}, {}}, depth, b, no_focus);
          if (!contains(s.left, f.right()))
            return apply(s, {Rule::AndL2, {Side::L, i}, {}, {}}, depth, b, no_focus);
          break;
        case Connective::Or:
          if (!contains(s.left, f.left()) && !contains(s.left, f.right()))
            return apply(s, {Rule::OrL, {Side::L, i}, {}, {}}, depth, b, no_focus);
          break;
        case Connective::Exists:
          if (!b.exl_done.count(f.hash())) {
            b.exl_done.insert(f.hash());
            return apply(s, {Rule::ExL, {Side::L, i}, {}, fresh_for(s)}, depth, b, no_focus);
          }
          break;
        case Connective::Implies:
          if (f.left().is_atomic() && contains(s.left, f.left()) && !contains(s.left, f.right())) {
            b.impl_done.insert(f.hash());
            return apply(s, {Rule::ImpL, {Side::L, i}, {}, {}}, depth, b,
                         [](std::size_t k, const Sequent& p) -> std::optional<std::size_t> {
                           if (k == 0) return p.right.size() - 1;
                           return std::nullopt;
                         });
          }
          break;
        default:
          break;
      }
    }

    return choose(s, depth, b);
  }

  // The strategic obligation: the focused occurrence is the next active one.
  std::optional<Derivation> focused(const Sequent& s, std::size_t slot, std::size_t depth, Branch& b) {
    const Formula& f = s.right[slot];
    if (f.is_atomic()) {
      if (contains(s.left, f)) return leaf(s, {Rule::Id, {Side::R, slot}, {}, {}});
      return std::nullopt;
    }
    if (depth == 0) {
      hit_cutoff_ = true;
      return std::nullopt;
    }
    switch (f.kind()) {
      case Connective::Implies: return apply(s, {Rule::ImpR, {Side::R, slot}, {}, {}}, depth, b, no_focus);
      case Connective::Or: return apply(s, {Rule::OrR, {Side::R, slot}, {}, {}}, depth, b, no_focus);
      case Connective::And: return apply(s, {Rule::AndR, {Side::R, slot}, {}, {}}, depth, b, no_focus);
      case Connective::Forall:
        return apply(s, {Rule::AllR, {Side::R, slot}, {}, fresh_for(s)}, depth, b, no_focus);
      case Connective::Exists: {
        used_terms_ = true;
        std::size_t& count = b.instances[f.hash()];
        if (count >= limits_.max_instantiations_per_formula) {
          hit_cutoff_ = true;
          return std::nullopt;
        }
        for (const auto& t : universe(s)) {
          if (b.witnesses.count(witness_key(f, t))) continue;
          Branch nb = b;
          nb.instances[f.hash()] += 1;
          nb.witnesses.insert(witness_key(f, t));
          auto d = apply(s, {Rule::ExR, {Side::R, slot}, t, {}}, depth, nb,
                         [](std::size_t, const Sequent& p) -> std::optional<std::size_t> {
                           return p.right.size() - 1;
                         });
          if (d) return d;
        }
        return std::nullopt;
      }
      default:
        return std::nullopt;
    }
  }

  // Closes an existential goal whose matrix is an atom already on the left,
  // through a chain of focused ExR steps ending in Id.
  std::optional<Derivation> existential_closure(const Sequent& s, std::size_t depth, Branch& b) {
    for (std::size_t i = 0; i < s.right.size(); ++i) {
      const Formula& f = s.right[i];
      if (f.kind() != Connective::Exists) continue;
      std::vector<std::string> vars;
      Formula matrix = f;
      while (matrix.kind() == Connective::Exists) {
        vars.push_back(matrix.bound_var());
        matrix = matrix.body();
      }
      if (!matrix.is_atomic()) continue;
      // Shadowed binders make the prefix ambiguous; leave those to search.
      std::set<std::string> pv(vars.begin(), vars.end());
      if (pv.size() != vars.size()) continue;
      for (const auto& a : s.left) {
        if (!a.is_atomic()) continue;
        auto m = match_pattern(matrix, pv, a);
        if (!m) continue;
        if (depth < vars.size()) {
          hit_cutoff_ = true;
          continue;
        }
        auto chain = closure_chain(s, i, vars, *m, 0, b);
        if (chain) return chain;
      }
    }
    (void)b;
    return std::nullopt;
  }

  std::optional<Derivation> closure_chain(const Sequent& s, std::size_t slot,
                                          const std::vector<std::string>& vars, const Substitution& m,
                                          std::size_t k, const Branch& b) {
    const Formula& f = s.right[slot];
    if (k == vars.size()) {
      if (f.is_atomic() && contains(s.left, f)) return leaf(s, {Rule::Id, {Side::R, slot}, {}, {}});
      return std::nullopt;
    }
    auto it = m.find(vars[k]);
    Term t = it != m.end() ? it->second : universe(s).front();
    if (b.witnesses.count(witness_key(f, t))) return std::nullopt;
    RuleApplication app{Rule::ExR, {Side::R, slot}, t, {}};
    auto premises = rule_premises(s, app);
    auto sub = closure_chain(premises[0], premises[0].right.size() - 1, vars, m, k + 1, b);
    if (!sub) return std::nullopt;
    return Derivation{s, app, {std::move(*sub)}};
  }

  std::optional<Derivation> choose(const Sequent& s, std::size_t depth, Branch& b) {
    std::size_t key = sequent_key(s);
    if (std::find(b.ancestors.begin(), b.ancestors.end(), key) != b.ancestors.end())
      return std::nullopt;
    b.ancestors.push_back(key);

    // ImpL with a compound antecedent: the left premise must decompose it.
    for (std::size_t i = 0; i < s.left.size(); ++i) {
      const Formula& f = s.left[i];
      if (f.kind() != Connective::Implies || f.left().is_atomic()) continue;
      if (b.impl_done.count(f.hash()) || contains(s.left, f.right())) continue;
      Branch nb = b;
      nb.impl_done.insert(f.hash());
      auto d = apply(s, {Rule::ImpL, {Side::L, i}, {}, {}}, depth, nb,
                     [](std::size_t k, const Sequent& p) -> std::optional<std::size_t> {
                       if (k == 0) return p.right.size() - 1;
                       return std::nullopt;
                     });
      if (d) return d;
    }

    std::vector<Term> terms;
    bool have_terms = false;
    auto get_terms = [&]() -> const std::vector<Term>& {
      if (!have_terms) {
        terms = universe(s);
        have_terms = true;
      }
      return terms;
    };

    for (std::size_t i = 0; i < s.right.size(); ++i) {
      const Formula& f = s.right[i];
      if (f.kind() != Connective::Exists) continue;
      used_terms_ = true;
      if (b.instances[f.hash()] >= limits_.max_instantiations_per_formula) {
        hit_cutoff_ = true;
        continue;
      }
      for (const auto& t : get_terms()) {
        if (contains(s.right, instantiate(f, t)) || b.witnesses.count(witness_key(f, t))) continue;
        Branch nb = b;
        nb.instances[f.hash()] += 1;
        nb.witnesses.insert(witness_key(f, t));
        auto d = apply(s, {Rule::ExR, {Side::R, i}, t, {}}, depth, nb,
                       [](std::size_t, const Sequent& p) -> std::optional<std::size_t> {
                         return p.right.size() - 1;
                       });
        if (d) return d;
      }
    }

    for (std::size_t i = 0; i < s.left.size(); ++i) {
      const Formula& f = s.left[i];
      if (f.kind() != Connective::Forall) continue;
      used_terms_ = true;
      if (b.instances[f.hash()] >= limits_.max_instantiations_per_formula) {
        hit_cutoff_ = true;
        continue;
      }
      for (const auto& t : get_terms()) {
        if (contains(s.left, instantiate(f, t))) continue;
        Branch nb = b;
        nb.instances[f.hash()] += 1;
        auto d = apply(s, {Rule::AllL, {Side::L, i}, t, {}}, depth, nb, no_focus);
        if (d) return d;
      }
    }
    return std::nullopt;
  }

  const SearchLimits& limits_;
  const ProveOptions& options_;
  Clock::time_point deadline_;
  std::size_t depth_ = 0;
  std::size_t fresh_ = 0;
  std::size_t nodes_ = 0;
  bool hit_cutoff_ = false;
  bool used_terms_ = false;
};

}  // namespace

std::optional<Derivation> prove(const Sequent& s, const SearchLimits& limits,
                                const ProveOptions& options) {
  auto deadline = Clock::now() + std::chrono::milliseconds(limits.time_budget_ms);
  Search search(limits, options, deadline);
  for (std::size_t level = 0;; ++level) {
    std::size_t depth = std::min(limits.max_depth, 10 + 10 * level);
    std::size_t fresh = std::min(limits.max_fresh_vars, level);
    if (auto d = search.run(s, depth, fresh)) return d;
    bool exhausted = depth == limits.max_depth && fresh == limits.max_fresh_vars;
    bool complete = !search.hit_cutoff() && (!search.used_terms() || fresh == limits.max_fresh_vars);
    if (exhausted || complete) return std::nullopt;
  }
}

}  // namespace dialogos
