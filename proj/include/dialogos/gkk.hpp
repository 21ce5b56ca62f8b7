#ifndef DIALOGOS_GKK_HPP
#define DIALOGOS_GKK_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogos/formula.hpp"

namespace dialogos {

/// Two-sided sequent. The vectors are multisets; positions are only used to
/// name occurrences ("slots").
struct Sequent {
  std::vector<Formula> left;
  std::vector<Formula> right;
};

/// Multiset equality up to alpha-equivalence.
bool same_multiset(const std::vector<Formula>& a, const std::vector<Formula>& b);
bool operator==(const Sequent& a, const Sequent& b);
std::string render(const Sequent& s);
std::set<std::string> free_variables(const Sequent& s);

enum class Rule { Id, ImpR, ImpL, AndR, AndL1, AndL2, OrR, OrL, ExR, ExL, AllR, AllL };
const char* to_string(Rule r);
std::optional<Rule> rule_from_string(const std::string& s);
std::size_t premise_count(Rule r);

enum class Side { L, R };

struct ActiveSlot {
  Side side;
  std::size_t index;
  friend bool operator==(const ActiveSlot&, const ActiveSlot&) = default;
};

struct RuleApplication {
  Rule rule;
  ActiveSlot active;
  std::optional<Term> term;          // ExR, AllL
  std::optional<std::string> eigen;  // AllR, ExL
};

struct Derivation {
  Sequent conclusion;
  RuleApplication rule;
  std::vector<Derivation> premises;

  std::size_t size() const;
  std::size_t height() const;
};

class RuleMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The premises of `rule` applied to `conclusion`, laid out canonically: the
/// first added formula on the active side takes the active slot when the
/// principal formula is consumed, every other added formula is appended.
/// Throws RuleMismatch when the rule does not fit the active formula.
std::vector<Sequent> rule_premises(const Sequent& conclusion, const RuleApplication& rule);

/// Where each premise occurrence comes from: the conclusion slot it copies,
/// or nullopt for a formula introduced by the rule.
struct SlotOrigins {
  std::vector<std::optional<std::size_t>> left;
  std::vector<std::optional<std::size_t>> right;
};
/// Origins for premise `k` of a node. The premise's own active occurrence is
/// matched to a newly introduced formula whenever that is possible.
std::optional<SlotOrigins> premise_origins(const Derivation& d, std::size_t k);

using NodePath = std::vector<std::size_t>;
std::string render(const NodePath& p);

struct DerivationReport {
  bool ok = true;
  NodePath path;
  std::string message;
};
DerivationReport validate_derivation(const Derivation& d);

struct StrategicReport {
  bool strategic = true;
  NodePath path;  // the ImpL or ExR node whose premise is wrong
  std::string message;
};
StrategicReport is_strategic(const Derivation& d);

struct SearchLimits {
  std::size_t max_depth = 40;
  std::size_t max_fresh_vars = 3;
  std::size_t max_instantiations_per_formula = 3;
  std::size_t time_budget_ms = 5000;
};

class TimeBudgetExceeded : public std::runtime_error {
 public:
  TimeBudgetExceeded() : std::runtime_error("time budget exceeded") {}
};

/// Subterms of the sequent (free positions only), then `fresh_budget` fresh
/// variables from the canonical enumeration. A term-free sequent still gets
/// one witness variable.
std::vector<Term> term_universe(const Sequent& s, std::size_t fresh_budget);

struct ProveOptions {
  /// Extra terms made available for quantifier instantiation.
  std::vector<Term> seed_terms;
};

/// Bounded strategic proof search. A returned derivation is valid, strategic
/// and concludes `s`; nullopt means the bounds were exhausted.
std::optional<Derivation> prove(const Sequent& s, const SearchLimits& limits,
                                const ProveOptions& options = {});

}  // namespace dialogos

#endif  // DIALOGOS_GKK_HPP
