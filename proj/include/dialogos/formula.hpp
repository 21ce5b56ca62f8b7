#ifndef DIALOGOS_FORMULA_HPP
#define DIALOGOS_FORMULA_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dialogos {

/// First-order term: a variable or a function application (constants are
/// 0-ary applications). Immutable; copies share the underlying node.
class Term {
 public:
  static Term var(std::string name);
  static Term app(std::string function, std::vector<Term> args = {});

  bool is_var() const;
  const std::string& name() const;
  std::span<const Term> args() const;
  std::size_t hash() const;
  /// Sorted, duplicate-free variable names of the term.
  const std::vector<std::string>& variables() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class Connective { Atom, Bottom, And, Or, Implies, Forall, Exists };

/// First-order formula. Negation is not primitive: ~F is Implies(F, Bottom).
///
/// Equality (operator==) is alpha-equivalence and hash() is invariant under
/// renaming of bound variables, so formulas can be used directly as keys.
class Formula {
 public:
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula bottom();
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula negation(Formula f) { return implies(std::move(f), bottom()); }
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Connective kind() const;
  bool is_atomic() const;  // Atom or Bottom
  bool is_binary() const;
  bool is_quantifier() const;
  bool is_negation() const;  // Implies(_, Bottom)

  const std::string& predicate() const;  // Atom only; "_|_" for Bottom
  std::span<const Term> args() const;    // Atom only
  const Formula& left() const;           // binary only
  const Formula& right() const;          // binary only
  const std::string& bound_var() const;  // quantifier only
  const Formula& body() const;           // quantifier only

  std::size_t hash() const;
  std::size_t size() const;  // node count
  std::size_t depth() const;
  /// Sorted, duplicate-free free variable names (cached).
  const std::vector<std::string>& free_vars() const;

  friend bool operator==(const Formula& a, const Formula& b);

  /// Structural identity including bound-variable names.
  bool identical(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make_binary(Connective k, Formula l, Formula r);
  static Formula make_quantifier(Connective k, std::string var, Formula body);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

inline constexpr const char* kBottomName = "_|_";

// ---------------------------------------------------------------------------
// Variables and substitution

using Substitution = std::map<std::string, Term>;

std::set<std::string> free_variables(const Term& t);
std::set<std::string> free_variables(const Formula& f);
/// Every variable name occurring in f, free or bound.
std::set<std::string> variable_names(const Formula& f);
void collect_variable_names(const Term& t, std::set<std::string>& out);

Term substitute(const Term& t, const Substitution& s);
/// Capture-avoiding simultaneous substitution; bound variables that would
/// capture a substituted term are renamed by appending primes.
Formula substitute(const Formula& f, const Substitution& s);
Formula substitute(const Formula& f, const std::string& var, const Term& t);

/// Instantiates a quantifier: body[t/x].
Formula instantiate(const Formula& quantified, const Term& t);

/// If `candidate` equals body[t/x] for some term t, returns the term (or
/// nullopt inside the outer optional when x does not occur free in body and
/// any term works).
std::optional<std::optional<Term>> match_instance(const Formula& body, const std::string& var,
                                                  const Formula& candidate);

/// Matches `candidate` against `pattern` where the names in `pattern_vars`
/// are schematic; on success returns the bindings found.
std::optional<Substitution> match_pattern(const Formula& pattern,
                                          const std::set<std::string>& pattern_vars,
                                          const Formula& candidate);

/// Appends, in order of first appearance and without duplicates, every
/// subterm of f that mentions no variable bound at its position.
void collect_free_subterms(const Formula& f, std::vector<Term>& out);
void collect_subterms(const Term& t, std::vector<Term>& out);

/// The canonical variable enumeration v0, v1, v2, ...
std::string enumerated_variable(std::size_t i);
/// First enumerated variable not in `used`.
std::string first_fresh_variable(const std::set<std::string>& used);

// ---------------------------------------------------------------------------
// Occurrences and polarity

enum class Step { Left, Right, Body };
using OccurrencePath = std::vector<Step>;

/// Resolves a path to the subformula it names; nullopt when the path leaves
/// the formula.
std::optional<Formula> subformula_at(const Formula& f, const OccurrencePath& path);

struct PolarityEntry {
  bool positive = false;
  bool negative = false;
  bool both() const { return positive && negative; }
};

/// Predicate-level summary of positive/negative Gentzen-subformula
/// occurrences. Always has an entry for "_|_".
using PolarityTable = std::map<std::string, PolarityEntry>;

PolarityTable polarity_table(const Formula& f);

struct AtomOccurrence {
  OccurrencePath path;
  Formula atom;
  bool positive;
};
/// Every structural atom occurrence with its polarity (quantifier bodies are
/// traversed without instantiation).
std::vector<AtomOccurrence> atom_occurrences(const Formula& f);

// ---------------------------------------------------------------------------
// Concrete syntax

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Signature context shared across several formulas (a sequent, a game):
/// arities must agree across all of them.
struct Signature {
  std::map<std::string, std::size_t> predicates;
  std::map<std::string, std::size_t> functions;
};

/// Free identifiers in term position that start with u..z are variables;
/// other free identifiers are constants. Bound identifiers are variables.
bool is_variable_name(const std::string& name);

Formula parse_formula(const std::string& text);
Formula parse_formula(const std::string& text, Signature& sig);
Term parse_term(const std::string& text);
Term parse_term(const std::string& text, Signature& sig);
/// Parses `F1, F2 |- G1, G2` (either side may be empty).
std::pair<std::vector<Formula>, std::vector<Formula>> parse_sequent_text(const std::string& text);

std::string render(const Term& t);
std::string render(const Formula& f);

}  // namespace dialogos

#endif  // DIALOGOS_FORMULA_HPP
