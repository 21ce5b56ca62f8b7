#include "dialogos/json_io.hpp"

#include <fstream>
#include <sstream>

namespace dialogos {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string text_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw FormatError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::size_t index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) throw FormatError(std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw FormatError(std::string("field \"") + key + "\" must be an array");
  return v;
}

Formula formula_from(const std::string& text, Signature& sig) {
  try {
    return parse_formula(text, sig);
  } catch (const ParseError& e) {
    throw FormatError("formula \"" + text + "\": " + e.what());
  }
}

Term term_from(const std::string& text, Signature& sig) {
  try {
    return parse_term(text, sig);
  } catch (const ParseError& e) {
    throw FormatError("term \"" + text + "\": " + e.what());
  }
}

const char* kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::AndLeft: return "and1";
    case AttackKind::AndRight: return "and2";
    case AttackKind::OrQuery: return "or";
    case AttackKind::ForallAt: return "forall";
    case AttackKind::ExistsQuery: return "exists";
    case AttackKind::FormulaAttack: return "formula";
  }
  return "?";
}

AttackSymbol attack_from(const Json& j, Signature& sig) {
  std::string k = text_field(j, "kind");
  if (k == "and1") return AttackSymbol::and_left();
  if (k == "and2") return AttackSymbol::and_right();
  if (k == "or") return AttackSymbol::or_query();
  if (k == "exists") return AttackSymbol::exists_query();
  if (k == "forall") return AttackSymbol::forall_at(term_from(text_field(j, "term"), sig));
  if (k == "formula") return AttackSymbol::formula_attack(formula_from(text_field(j, "formula"), sig));
  throw FormatError("unknown attack kind \"" + k + "\"");
}

Move move_from(const Json& j, Signature& sig) {
  std::string pol = text_field(j, "polarity");
  std::size_t enabler = index_field(j, "enabler");
  if (pol == "?") return Move::make_attack(attack_from(field(j, "attack"), sig), enabler);
  if (pol == "!") return Move::make_defence(formula_from(text_field(j, "formula"), sig), enabler);
  throw FormatError("polarity must be \"?\" or \"!\"");
}

StrategyNode node_from(const Json& j, Signature& sig) {
  StrategyNode n{move_from(field(j, "move"), sig), {}};
  if (j.contains("children"))
    for (const auto& c : array_field(j, "children")) n.children.push_back(node_from(c, sig));
  return n;
}

Json node_to(const StrategyNode& n) {
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(node_to(c));
  return {{"move", to_json(n.move)}, {"children", children}};
}

std::vector<Formula> formulas_from(const Json& arr, Signature& sig) {
  if (!arr.is_array()) throw FormatError("sequent sides must be arrays of formulas");
  std::vector<Formula> out;
  for (const auto& f : arr) {
    if (!f.is_string()) throw FormatError("sequent entries must be formula strings");
    out.push_back(formula_from(f.get<std::string>(), sig));
  }
  return out;
}

Derivation derivation_from(const Json& j, Signature& sig) {
  const Json& seq = field(j, "sequent");
  Derivation d;
  d.conclusion.left = formulas_from(field(seq, "left"), sig);
  d.conclusion.right = formulas_from(field(seq, "right"), sig);
  auto rule = rule_from_string(text_field(j, "rule"));
  if (!rule) throw FormatError("unknown rule \"" + text_field(j, "rule") + "\"");
  const Json& active = field(j, "active");
  std::string side = text_field(active, "side");
  if (side != "L" && side != "R") throw FormatError("active side must be \"L\" or \"R\"");
  d.rule = {*rule, {side == "L" ? Side::L : Side::R, index_field(active, "index")}, std::nullopt, std::nullopt};
  if (j.contains("term")) d.rule.term = term_from(text_field(j, "term"), sig);
  if (j.contains("eigen")) d.rule.eigen = text_field(j, "eigen");
  if (j.contains("premises"))
    for (const auto& p : array_field(j, "premises")) d.premises.push_back(derivation_from(p, sig));
  return d;
}

Json formulas_to(const std::vector<Formula>& fs) {
  Json a = Json::array();
  for (const auto& f : fs) a.push_back(render(f));
  return a;
}

Json direction_to(const DirectionResult& r) {
  Json j = {{"direction", to_string(r.direction)}, {"formula", render(r.formula)}, {"timed_out", r.timed_out}};
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  if (r.strategy) j["strategy"] = to_json(*r.strategy);
  return j;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "JSON syntax error at line " << line << ", column " << column;
    throw FormatError(msg.str());
  }
}

Json to_json(const AttackSymbol& a) {
  Json j = {{"kind", kind_name(a.kind)}};
  if (a.term) j["term"] = render(*a.term);
  if (a.formula) j["formula"] = render(*a.formula);
  return j;
}

Json to_json(const Move& m) {
  Json j;
  if (m.polarity == Polarity::Attack) {
    j = {{"polarity", "?"}, {"attack", to_json(*m.attack)}};
  } else {
    j = {{"polarity", "!"}, {"formula", render(*m.defence)}};
  }
  if (m.enabler) j["enabler"] = *m.enabler;
  return j;
}

Move move_from_json(const Json& j) {
  Signature sig;
  return move_from(j, sig);
}

AttackSymbol attack_from_json(const Json& j) {
  Signature sig;
  return attack_from(j, sig);
}

Json to_json(const Game& g) {
  Json moves = Json::array();
  for (std::size_t i = 1; i < g.moves.size(); ++i) moves.push_back(to_json(g.moves[i]));
  return {{"formula", render(g.root)}, {"moves", moves}};
}

Game game_from_json(const Json& j) {
  Signature sig;
  Game g(formula_from(text_field(j, "formula"), sig));
  for (const auto& m : array_field(j, "moves")) g = extend_game(g, move_from(m, sig));
  return g;
}

Json to_json(const Strategy& s) {
  Json children = Json::array();
  for (const auto& c : s.children) children.push_back(node_to(c));
  return {{"formula", render(s.root)}, {"children", children}};
}

Strategy strategy_from_json(const Json& j) {
  Signature sig;
  Strategy s{formula_from(text_field(j, "formula"), sig), {}};
  for (const auto& c : array_field(j, "children")) s.children.push_back(node_from(c, sig));
  return s;
}

Json to_json(const Sequent& s) { return {{"left", formulas_to(s.left)}, {"right", formulas_to(s.right)}}; }

Json to_json(const Derivation& d) {
  Json premises = Json::array();
  for (const auto& p : d.premises) premises.push_back(to_json(p));
  Json j = {{"sequent", to_json(d.conclusion)},
            {"rule", to_string(d.rule.rule)},
            {"active", {{"side", d.rule.active.side == Side::L ? "L" : "R"}, {"index", d.rule.active.index}}},
            {"premises", premises}};
  if (d.rule.term) j["term"] = render(*d.rule.term);
  if (d.rule.eigen) j["eigen"] = *d.rule.eigen;
  return j;
}

Derivation derivation_from_json(const Json& j) {
  Signature sig;
  return derivation_from(j, sig);
}

Json to_json(const OProjection& p) {
  Json children = Json::array();
  for (const auto& c : p.children) children.push_back(to_json(c));
  Json path = Json::array();
  for (auto i : p.strategy_path) path.push_back(i);
  Json j = {{"sequent", render(p.sequent)}, {"strategy_path", path}, {"children", children}};
  if (p.move) j["move"] = to_json(*p.move);
  if (p.chosen_variable) j["chosen_variable"] = *p.chosen_variable;
  return j;
}

Json to_json(const PolarityCertificate& c) {
  Json assignment = Json::object();
  for (const auto& [name, value] : c.assignment) assignment[name] = value;
  return {{"predicate", c.predicate}, {"assignment", assignment}, {"reason", c.reason}};
}

Json to_json(const Verdict& v) {
  return {{"answer", to_string(v.answer)},      {"evidence", to_string(v.evidence)},
          {"inconsistent", v.inconsistent},     {"timed_out", v.timed_out},
          {"positive", direction_to(v.positive)}, {"negative", direction_to(v.negative)}};
}

Json to_json(const MoveDescriptor& d) {
  return {{"player", d.player == Player::P ? "P" : "O"}, {"move", to_json(d.move)}, {"open_term", d.open_term}};
}

std::vector<Problem> problems_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("a suite must be a JSON array of problems");
  std::vector<Problem> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    std::string where = "problem " + std::to_string(i);
    try {
      std::string id = text_field(e, "id");
      where = "problem \"" + id + "\"";
      std::vector<std::string> hyps;
      for (const auto& h : array_field(e, "hypotheses")) {
        if (!h.is_string()) throw FormatError("hypotheses must be formula strings");
        hyps.push_back(h.get<std::string>());
      }
      Problem p = make_problem(id, hyps, text_field(e, "conclusion"));
      if (e.contains("expected")) {
        auto a = answer_from_string(text_field(e, "expected"));
        if (!a) throw FormatError("expected must be yes, no or unknown");
        p.expected = a;
      }
      if (e.contains("description")) p.description = text_field(e, "description");
      out.push_back(std::move(p));
    } catch (const ParseError& err) {
      throw FormatError(where + ": " + err.what());
    } catch (const std::invalid_argument& err) {
      throw FormatError(where + ": " + err.what());
    } catch (const FormatError& err) {
      throw FormatError(where + ": " + err.what());
    }
  }
  return out;
}

SuiteSummary run_suite_file(const std::string& path, const SearchLimits& limits) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return run_suite(problems_from_json(parse_json(buf.str())), limits);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

DocumentKind document_kind(const Json& j) {
  if (!j.is_object()) return DocumentKind::Unknown;
  if (j.contains("sequent")) return DocumentKind::Derivation;
  if (j.contains("moves")) return DocumentKind::Game;
  if (j.contains("children")) return DocumentKind::Strategy;
  return DocumentKind::Unknown;
}

}  // namespace dialogos
