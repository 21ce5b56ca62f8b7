#include "dialogos/gkk.hpp"

#include <algorithm>
#include <sstream>

namespace dialogos {

bool same_multiset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& f : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && b[j] == f) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

bool operator==(const Sequent& a, const Sequent& b) {
  return same_multiset(a.left, b.left) && same_multiset(a.right, b.right);
}

std::string render(const Sequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.left.size(); ++i) os << (i ? ", " : "") << render(s.left[i]);
  os << (s.left.empty() ? "|-" : " |-");
  for (std::size_t i = 0; i < s.right.size(); ++i) os << (i ? ", " : " ") << render(s.right[i]);
  return os.str();
}

std::set<std::string> free_variables(const Sequent& s) {
  std::set<std::string> out;
  for (const auto* side : {&s.left, &s.right})
    for (const auto& f : *side) out.insert(f.free_vars().begin(), f.free_vars().end());
  return out;
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Id: return "Id";
    case Rule::ImpR: return "ImpR";
    case Rule::ImpL: return "ImpL";
    case Rule::AndR: return "AndR";
    case Rule::AndL1: return "AndL1";
    case Rule::AndL2: return "AndL2";
    case Rule::OrR: return "OrR";
    case Rule::OrL: return "OrL";
    case Rule::ExR: return "ExR";
    case Rule::ExL: return "ExL";
    case Rule::AllR: return "AllR";
    case Rule::AllL: return "AllL";
  }
  return "?";
}

std::optional<Rule> rule_from_string(const std::string& s) {
  for (Rule r : {Rule::Id, Rule::ImpR, Rule::ImpL, Rule::AndR, Rule::AndL1, Rule::AndL2, Rule::OrR,
                 Rule::OrL, Rule::ExR, Rule::ExL, Rule::AllR, Rule::AllL})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

std::size_t premise_count(Rule r) {
  switch (r) {
    case Rule::Id: return 0;
    case Rule::ImpL:
    case Rule::AndR:
    case Rule::OrL: return 2;
    default: return 1;
  }
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

std::size_t Derivation::height() const {
  std::size_t h = 0;
  for (const auto& p : premises) h = std::max(h, p.height());
  return h + 1;
}

namespace {

// What a rule does to its conclusion: optionally consume the active slot,
// and per premise add formulas to each side.
struct Schema {
  bool consumes = false;
  struct Added {
    std::vector<Formula> left, right;
  };
  std::vector<Added> premises;
};

const Formula& slot(const Sequent& s, const ActiveSlot& a) {
  const auto& side = a.side == Side::L ? s.left : s.right;
  if (a.index >= side.size()) throw RuleMismatch("active slot out of range");
  return side[a.index];
}

Schema schema(const Sequent& c, const RuleApplication& app) {
  const Formula& f = slot(c, app.active);
  const bool left = app.active.side == Side::L;
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw RuleMismatch(std::string(to_string(app.rule)) + ": " + what);
  };
  auto need_kind = [&](Connective k, bool on_left) {
    need(f.kind() == k, "active formula has the wrong shape");
    need(left == on_left, "active formula is on the wrong side");
  };
  auto eigen_ok = [&] {
    need(app.eigen.has_value(), "missing eigenvariable");
    need(is_variable_name(*app.eigen), "eigenvariable must be a variable name");
    need(!free_variables(c).count(*app.eigen), "eigenvariable occurs free in the conclusion");
  };
  Schema s;
  switch (app.rule) {
    case Rule::Id: {
      need(!left, "active formula must be on the right");
      need(f.is_atomic(), "active formula must be atomic");
      need(std::find(c.left.begin(), c.left.end(), f) != c.left.end(),
           "active formula does not occur on the left");
      return s;
    }
    case Rule::ImpR:
      need_kind(Connective::Implies, false);
      s.consumes = true;
      s.premises = {{{f.left()}, {f.right()}}};
      return s;
    case Rule::ImpL:
      need_kind(Connective::Implies, true);
      s.premises = {{{}, {f.left()}}, {{f.right()}, {}}};
      return s;
    case Rule::AndR:
      need_kind(Connective::And, false);
      s.consumes = true;
      s.premises = {{{}, {f.left()}}, {{}, {f.right()}}};
      return s;
    case Rule::AndL1:
    case Rule::AndL2:
      need_kind(Connective::And, true);
      s.premises = {{{app.rule == Rule::AndL1 ? f.left() : f.right()}, {}}};
      return s;
    case Rule::OrR:
      need_kind(Connective::Or, false);
      s.consumes = true;
      s.premises = {{{}, {f.left(), f.right()}}};
      return s;
    case Rule::OrL:
      need_kind(Connective::Or, true);
      s.premises = {{{f.left()}, {}}, {{f.right()}, {}}};
      return s;
    case Rule::ExR:
      need_kind(Connective::Exists, false);
      need(app.term.has_value(), "missing term");
      s.premises = {{{}, {instantiate(f, *app.term)}}};
      return s;
    case Rule::ExL:
      need_kind(Connective::Exists, true);
      eigen_ok();
      s.premises = {{{instantiate(f, Term::var(*app.eigen))}, {}}};
      return s;
    case Rule::AllR:
      need_kind(Connective::Forall, false);
      eigen_ok();
      s.consumes = true;
      s.premises = {{{}, {instantiate(f, Term::var(*app.eigen))}}};
      return s;
    case Rule::AllL:
      need_kind(Connective::Forall, true);
      need(app.term.has_value(), "missing term");
      s.premises = {{{instantiate(f, *app.term)}, {}}};
      return s;
  }
  return s;
}

}  // namespace

std::vector<Sequent> rule_premises(const Sequent& c, const RuleApplication& app) {
  Schema sc = schema(c, app);
  std::vector<Sequent> out;
  for (const auto& added : sc.premises) {
    Sequent p = c;
    auto place = [&](std::vector<Formula>& side, const std::vector<Formula>& add, bool active_side) {
      std::size_t k = 0;
      if (active_side && sc.consumes && !add.empty()) side[app.active.index] = add[k++];
      for (; k < add.size(); ++k) side.push_back(add[k]);
    };
    place(p.left, added.left, app.active.side == Side::L);
    place(p.right, added.right, app.active.side == Side::R);
    if (sc.consumes) {
      // A consumed slot with nothing on its own side to replace it is erased.
      auto& side = app.active.side == Side::L ? p.left : p.right;
      const auto& add = app.active.side == Side::L ? added.left : added.right;
      if (add.empty()) side.erase(side.begin() + static_cast<std::ptrdiff_t>(app.active.index));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<SlotOrigins> premise_origins(const Derivation& d, std::size_t k) {
  if (k >= d.premises.size()) return std::nullopt;
  Schema sc;
  try {
    sc = schema(d.conclusion, d.rule);
  } catch (const RuleMismatch&) {
    return std::nullopt;
  }
  if (k >= sc.premises.size()) return std::nullopt;
  const Derivation& prem = d.premises[k];
  SlotOrigins out;

  auto match_side = [&](Side side, std::vector<std::optional<std::size_t>>& origins) -> bool {
    const auto& conc = side == Side::L ? d.conclusion.left : d.conclusion.right;
    const auto& have = side == Side::L ? prem.conclusion.left : prem.conclusion.right;
    const auto& added = side == Side::L ? sc.premises[k].left : sc.premises[k].right;
    std::vector<bool> old_used(conc.size(), false), new_used(added.size(), false);
    if (sc.consumes && d.rule.active.side == side) old_used[d.rule.active.index] = true;
    origins.assign(have.size(), std::nullopt);
    std::vector<bool> done(have.size(), false);

    auto take_new = [&](std::size_t j) {
      for (std::size_t a = 0; a < added.size(); ++a)
        if (!new_used[a] && added[a] == have[j]) {
          new_used[a] = done[j] = true;
          return true;
        }
      return false;
    };
    // The premise's own active occurrence prefers a newly introduced formula.
    if (prem.rule.active.side == side && prem.rule.active.index < have.size())
      take_new(prem.rule.active.index);
    for (std::size_t j = 0; j < have.size(); ++j) {
      if (done[j] || j >= conc.size() || old_used[j] || !(conc[j] == have[j])) continue;
      old_used[j] = done[j] = true;
      origins[j] = j;
    }
    for (std::size_t j = 0; j < have.size(); ++j) {
      if (done[j]) continue;
      for (std::size_t i = 0; i < conc.size() && !done[j]; ++i)
        if (!old_used[i] && conc[i] == have[j]) {
          old_used[i] = done[j] = true;
          origins[j] = i;
        }
      if (!done[j] && !take_new(j)) return false;
    }
    return std::all_of(old_used.begin(), old_used.end(), [](bool b) { return b; }) &&
           std::all_of(new_used.begin(), new_used.end(), [](bool b) { return b; });
  };
  if (!match_side(Side::L, out.left) || !match_side(Side::R, out.right)) return std::nullopt;
  return out;
}

std::string render(const NodePath& p) {
  std::string s = "root";
  for (auto i : p) s += "." + std::to_string(i);
  return s;
}

namespace {

void validate_node(const Derivation& d, NodePath& path, DerivationReport& rep) {
  if (!rep.ok) return;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.path = path;
    rep.message = msg + " at " + render(d.conclusion);
  };
  std::vector<Sequent> expected;
  try {
    expected = rule_premises(d.conclusion, d.rule);
  } catch (const RuleMismatch& e) {
    return fail(e.what());
  }
  if (d.premises.size() != expected.size())
    return fail(std::string(to_string(d.rule.rule)) + " expects " + std::to_string(expected.size()) +
                " premises, found " + std::to_string(d.premises.size()));
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (!(expected[k] == d.premises[k].conclusion))
      return fail("premise " + std::to_string(k) + " should be " + render(expected[k]) + ", found " +
                  render(d.premises[k].conclusion));
  }
  for (std::size_t k = 0; k < d.premises.size(); ++k) {
    path.push_back(k);
    validate_node(d.premises[k], path, rep);
    path.pop_back();
  }
}

void strategic_node(const Derivation& d, NodePath& path, StrategicReport& rep) {
  if (!rep.strategic) return;
  if ((d.rule.rule == Rule::ImpL || d.rule.rule == Rule::ExR) && !d.premises.empty()) {
    const Derivation& p = d.premises[0];
    auto origins = premise_origins(d, 0);
    bool ok = origins && p.rule.active.side == Side::R &&
              p.rule.active.index < origins->right.size() && !origins->right[p.rule.active.index];
    if (!ok) {
      rep.strategic = false;
      rep.path = path;
      rep.message = d.rule.rule == Rule::ImpL
                        ? "left premise of ImpL does not make the antecedent active (active rule " +
                              std::string(to_string(p.rule.rule)) + ")"
                        : "premise of ExR does not make the instance active (active rule " +
                              std::string(to_string(p.rule.rule)) + ")";
      return;
    }
  }
  for (std::size_t k = 0; k < d.premises.size(); ++k) {
    path.push_back(k);
    strategic_node(d.premises[k], path, rep);
    path.pop_back();
  }
}

}  // namespace

DerivationReport validate_derivation(const Derivation& d) {
  DerivationReport rep;
  NodePath path;
  validate_node(d, path, rep);
  return rep;
}

StrategicReport is_strategic(const Derivation& d) {
  StrategicReport rep;
  NodePath path;
  strategic_node(d, path, rep);
  return rep;
}

std::vector<Term> term_universe(const Sequent& s, std::size_t fresh_budget) {
  std::vector<Term> out;
  for (const auto* side : {&s.left, &s.right})
    for (const auto& f : *side) collect_free_subterms(f, out);
  std::set<std::string> used;
  for (const auto* side : {&s.left, &s.right})
    for (const auto& f : *side) {
      auto vs = variable_names(f);
      used.insert(vs.begin(), vs.end());
    }
  std::size_t want = fresh_budget;
  if (out.empty() && want == 0) want = 1;
  for (std::size_t k = 0; k < want; ++k) {
    std::string v = first_fresh_variable(used);
    used.insert(v);
    out.push_back(Term::var(v));
  }
  return out;
}

}  // namespace dialogos
