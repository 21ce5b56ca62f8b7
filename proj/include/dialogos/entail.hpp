#ifndef DIALOGOS_ENTAIL_HPP
#define DIALOGOS_ENTAIL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialogos/strategy.hpp"

namespace dialogos {

enum class Answer { Yes, No, Unknown };
const char* to_string(Answer a);
std::optional<Answer> answer_from_string(const std::string& s);

enum class Direction { Positive, Negative };
const char* to_string(Direction d);

struct Problem {
  std::string id;
  std::vector<Formula> hypotheses;
  Formula conclusion;
  std::optional<Answer> expected;
  std::string description;
};

/// Parses the formulas of a problem. Throws ParseError, or
/// std::invalid_argument for an empty hypothesis list or an open formula.
Problem make_problem(const std::string& id, const std::vector<std::string>& hypotheses,
                     const std::string& conclusion);

/// Positive: (H1 & (H2 & ...)) -> C. Negative: (H1 & (H2 & ...)) -> ~C.
Formula build_formula(const Problem& p, Direction d);

/// Evidence that a formula has no winning strategy. Predicates occurring with
/// one polarity only are fixed to their least favourable value (positive-only
/// false, negative-only true) and the formula is simplified over a nonempty
/// domain, reading bottom as false; this repeats while it makes progress. The certificate is issued
/// when the formula collapses to false. In particular it fires whenever no
/// predicate occurs with both polarities.
struct PolarityCertificate {
  std::string predicate;  // the first positive-only predicate fixed, if any
  std::map<std::string, bool> assignment;
  std::string reason;
};
std::optional<PolarityCertificate> polarity_precheck(const Formula& f);

struct DirectionResult {
  Direction direction;
  Formula formula;
  std::optional<PolarityCertificate> certificate;
  std::optional<Strategy> strategy;  // validated and winning
  bool timed_out = false;
};

enum class Evidence { WinningStrategy, RefutingStrategy, PolarityCertificate, BoundsExhausted };
const char* to_string(Evidence e);

struct Verdict {
  Answer answer;
  Evidence evidence;
  DirectionResult positive;
  DirectionResult negative;
  /// Both directions won: the hypotheses are inconsistent.
  bool inconsistent = false;
  bool timed_out = false;
};

Verdict decide(const Problem& p, const SearchLimits& limits);

struct SuiteEntry {
  Problem problem;
  Verdict verdict;
  bool matches() const { return !problem.expected || *problem.expected == verdict.answer; }
};
struct SuiteSummary {
  std::vector<SuiteEntry> entries;
  std::size_t mismatches() const;
};
SuiteSummary run_suite(const std::vector<Problem>& problems, const SearchLimits& limits);

}  // namespace dialogos

#endif  // DIALOGOS_ENTAIL_HPP
