#ifndef DIALOGOS_JSON_IO_HPP
#define DIALOGOS_JSON_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "dialogos/dialogue.hpp"
#include "dialogos/entail.hpp"
#include "dialogos/gkk.hpp"
#include "dialogos/strategy.hpp"
#include "dialogos/translate.hpp"

namespace dialogos {

using Json = nlohmann::json;

/// Malformed JSON document or a document of the wrong shape.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text, reporting syntax errors with line and column.
Json parse_json(const std::string& text);

// Moves: {"polarity": "?", "attack": {"kind": "and1"|"and2"|"or"|"forall"|
// "exists"|"formula", "term"?, "formula"?}, "enabler": n} or
// {"polarity": "!", "formula": "...", "enabler": n}.
Json to_json(const AttackSymbol& a);
Json to_json(const Move& m);
Move move_from_json(const Json& j);
AttackSymbol attack_from_json(const Json& j);

// Games: {"formula": "...", "moves": [move...]} without the initial move.
Json to_json(const Game& g);
Game game_from_json(const Json& j);  // checks legality move by move

// Strategies: {"formula": "...", "children": [{"move": m, "children": [...]}]}.
Json to_json(const Strategy& s);
Strategy strategy_from_json(const Json& j);

// Derivations: {"sequent": {"left": [...], "right": [...]}, "rule": "ImpR",
// "active": {"side": "L"|"R", "index": n}, "term"?, "eigen"?, "premises": [...]}.
Json to_json(const Sequent& s);
Json to_json(const Derivation& d);
Derivation derivation_from_json(const Json& j);

Json to_json(const OProjection& p);
Json to_json(const PolarityCertificate& c);
Json to_json(const Verdict& v);
Json to_json(const MoveDescriptor& d);

// Suites: [{"id", "hypotheses": [...], "conclusion", "expected"?, "description"?}].
std::vector<Problem> problems_from_json(const Json& j);
/// Reads and runs a suite file; errors name the file and position.
SuiteSummary run_suite_file(const std::string& path, const SearchLimits& limits);

enum class DocumentKind { Game, Strategy, Derivation, Unknown };
/// Classifies a document by its keys.
DocumentKind document_kind(const Json& j);

}  // namespace dialogos

#endif  // DIALOGOS_JSON_IO_HPP
