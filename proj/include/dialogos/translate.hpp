#ifndef DIALOGOS_TRANSLATE_HPP
#define DIALOGOS_TRANSLATE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogos/gkk.hpp"
#include "dialogos/strategy.hpp"

namespace dialogos {

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotWinning : public TranslationError {
 public:
  using TranslationError::TranslationError;
};
class NotStrategic : public TranslationError {
 public:
  using TranslationError::TranslationError;
};
class NotSingleConclusion : public TranslationError {
 public:
  using TranslationError::TranslationError;
};
class InvalidDerivation : public TranslationError {
 public:
  using TranslationError::TranslationError;
};
class StrategizationFailed : public TranslationError {
 public:
  using TranslationError::TranslationError;
};

/// One node of the O-projection of a strategy: the sequence of O moves up to
/// here (the root is the empty sequence), its sequent, and a pointer back to
/// the strategy node of the last O move.
struct ProjectionNode {
  std::optional<Move> move;
  NodePath strategy_path;
  Sequent sequent;
  /// Variable picked by O when the move is a universal attack or an
  /// existential defence.
  std::optional<std::string> chosen_variable;
  std::vector<ProjectionNode> children;
};
using OProjection = ProjectionNode;

/// Sequent labelling of the O-projection. Throws NotWinning when some O move
/// is left unanswered.
OProjection label_sequents(const Strategy& s);

/// A derivation of `|- root` read off the labelled projection.
Derivation strategy_to_derivation(const Strategy& s);

/// Each variable chosen by O must be absent from the parent label.
struct LemmaReport {
  bool ok = true;
  std::size_t checked = 0;
  NodePath strategy_path;
  std::string message;
};
LemmaReport check_fresh_variable_lemma(const OProjection& p);

/// Strategy for the single formula concluded by a strategic derivation.
/// Throws InvalidDerivation, NotSingleConclusion or NotStrategic.
Strategy derivation_to_strategy(const Derivation& d);

/// A strategic derivation of the same sequent: the input when it already is
/// strategic, else existential rules are pushed upwards, else the sequent is
/// re-proved with the input's instantiation terms as seeds.
Derivation strategize(const Derivation& d, const SearchLimits& limits = {});

}  // namespace dialogos

#endif  // DIALOGOS_TRANSLATE_HPP
