// Command-line front end: parsing, proof search, translation, validation,
// entailment and the game server.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dialogos/entail.hpp"
#include "dialogos/json_io.hpp"
#include "dialogos/server.hpp"
#include "dialogos/translate.hpp"

using namespace dialogos;

namespace {

constexpr int kError = 3;

struct Options {
  SearchLimits limits;
  std::string format = "text";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json(const std::string& path) {
  try {
    return parse_json(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

Sequent sequent_from_text(const std::string& text) {
  if (text.find("|-") == std::string::npos) return {{}, {parse_formula(text)}};
  auto [left, right] = parse_sequent_text(text);
  return {left, right};
}

int cmd_parse(const std::string& text) {
  Formula f = parse_formula(text);
  std::cout << render(f) << "\n";
  for (const auto& [name, pol] : polarity_table(f)) {
    if (!pol.positive && !pol.negative) continue;
    std::cout << "  " << name << ": " << (pol.both() ? "both" : pol.positive ? "positive" : "negative") << "\n";
  }
  return 0;
}

int cmd_prove(const std::string& text, bool strategic_check, const Options& o) {
  Sequent s = sequent_from_text(text);
  std::optional<Derivation> d;
  try {
    d = prove(s, o.limits);
  } catch (const TimeBudgetExceeded&) {
    std::cerr << "time budget exceeded\n";
  }
  if (!d) {
    std::cout << "NONE\n";
    return 0;
  }
  std::cout << to_json(*d).dump(2) << "\n";
  if (strategic_check) {
    auto r = is_strategic(*d);
    std::cerr << "strategic-check: " << (r.strategic ? "true" : "false") << "\n";
  }
  return 0;
}

int cmd_strategy(const std::string& text, const Options& o) {
  std::optional<Strategy> s;
  try {
    s = find_winning_strategy(parse_formula(text), o.limits);
  } catch (const TimeBudgetExceeded&) {
    std::cerr << "time budget exceeded\n";
  }
  if (!s) {
    std::cout << "NONE\n";
    return 0;
  }
  std::cout << to_json(*s).dump(2) << "\n";
  return 0;
}

int cmd_translate(const std::string& to_derivation, const std::string& to_strategy, const std::string& to_strategic,
                  const Options& o) {
  if (!to_derivation.empty()) {
    std::cout << to_json(strategy_to_derivation(strategy_from_json(read_json(to_derivation)))).dump(2) << "\n";
  } else if (!to_strategy.empty()) {
    std::cout << to_json(derivation_to_strategy(derivation_from_json(read_json(to_strategy)))).dump(2) << "\n";
  } else {
    std::cout << to_json(strategize(derivation_from_json(read_json(to_strategic)), o.limits)).dump(2) << "\n";
  }
  return 0;
}

int cmd_check(const std::string& path) {
  Json j = read_json(path);
  switch (document_kind(j)) {
    case DocumentKind::Game: {
      Game g = game_from_json(j);
      auto w = game_winner(g, default_universe(g));
      std::cout << "valid game of " << g.size() << " moves, winner: " << to_string(w) << "\n";
      return 0;
    }
    case DocumentKind::Strategy: {
      Strategy s = strategy_from_json(j);
      auto r = validate_strategy(s);
      if (!r.ok) {
        std::cout << "invalid strategy: condition " << r.condition << " at " << render(r.path) << ": " << r.message
                  << "\n";
        return kError;
      }
      std::cout << "valid strategy of " << s.size() << " moves, winning: " << (is_winning(s) ? "yes" : "no") << "\n";
      return 0;
    }
    case DocumentKind::Derivation: {
      Derivation d = derivation_from_json(j);
      auto r = validate_derivation(d);
      if (!r.ok) {
        std::cout << "invalid derivation at " << render(r.path) << ": " << r.message << "\n";
        return kError;
      }
      auto st = is_strategic(d);
      std::cout << "valid derivation of " << d.size() << " nodes, strategic: " << (st.strategic ? "yes" : "no");
      if (!st.strategic) std::cout << " (" << render(st.path) << ": " << st.message << ")";
      std::cout << "\n";
      return 0;
    }
    case DocumentKind::Unknown: break;
  }
  std::cerr << path << ": not a game, strategy or derivation document\n";
  return kError;
}

void print_verdict(const Verdict& v) {
  std::cout << to_string(v.answer) << " (" << to_string(v.evidence) << ")";
  if (v.inconsistent) std::cout << " [hypotheses inconsistent]";
  if (v.timed_out) std::cout << " [time budget exceeded]";
  std::cout << "\n";
  for (const auto* d : {&v.positive, &v.negative}) {
    std::cout << "  " << to_string(d->direction) << ": ";
    if (d->strategy) std::cout << "winning strategy of " << d->strategy->size() << " moves";
    else if (d->certificate) std::cout << "no strategy, certificate: " << d->certificate->reason;
    else std::cout << "no strategy within bounds";
    std::cout << "\n";
  }
}

int cmd_entail(const std::vector<std::string>& hyps, const std::string& conclusion, const Options& o) {
  Verdict v = decide(make_problem("cli", hyps, conclusion), o.limits);
  if (o.format == "json") std::cout << to_json(v).dump(2) << "\n";
  else print_verdict(v);
  switch (v.answer) {
    case Answer::Yes: return 0;
    case Answer::No: return 1;
    case Answer::Unknown: return 2;
  }
  return kError;
}

int cmd_suite(const std::string& path, const Options& o) {
  auto summary = run_suite_file(path, o.limits);
  if (o.format == "json") {
    Json out = Json::array();
    for (const auto& e : summary.entries) {
      Json entry = {{"id", e.problem.id}, {"verdict", to_json(e.verdict)}, {"matches", e.matches()}};
      if (e.problem.expected) entry["expected"] = to_string(*e.problem.expected);
      out.push_back(entry);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& e : summary.entries) {
      std::cout << e.problem.id << ": " << to_string(e.verdict.answer) << " (" << to_string(e.verdict.evidence) << ")";
      if (e.problem.expected)
        std::cout << ", expected " << to_string(*e.problem.expected) << (e.matches() ? "" : "  MISMATCH");
      std::cout << "\n";
    }
    std::size_t n = summary.entries.size();
    std::cout << (n - summary.mismatches()) << "/" << n << " match\n";
  }
  return summary.mismatches() == 0 ? 0 : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialogical games, strategic sequent proofs and textual entailment"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_option("--depth", o.limits.max_depth, "maximum derivation depth")->capture_default_str();
  app.add_option("--fresh", o.limits.max_fresh_vars, "fresh variables per search")->capture_default_str();
  app.add_option("--inst", o.limits.max_instantiations_per_formula, "instantiations per quantified formula")
      ->capture_default_str();
  app.add_option("--timeout-ms", o.limits.time_budget_ms, "time budget per search")->capture_default_str();
  app.add_option("--format", o.format, "output format for entail and suite")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string text;
  auto* parse = app.add_subcommand("parse", "print the canonical form and polarity table of a formula");
  parse->add_option("formula", text)->required();

  bool strategic_check = false;
  auto* prove_cmd = app.add_subcommand("prove", "search for a strategic derivation of a sequent or formula");
  prove_cmd->add_option("sequent", text, "\"F1, F2 |- G\" or a formula")->required();
  prove_cmd->add_flag("--strategic-check", strategic_check, "report the strategic check on stderr");

  auto* strategy_cmd = app.add_subcommand("strategy", "search for a winning strategy");
  strategy_cmd->add_option("formula", text)->required();

  std::string to_derivation, to_strategy, to_strategic;
  auto* translate = app.add_subcommand("translate", "translate between strategies and derivations");
  auto* g1 = translate->add_option("--to-derivation", to_derivation, "strategy file");
  auto* g2 = translate->add_option("--to-strategy", to_strategy, "derivation file");
  auto* g3 = translate->add_option("--strategize", to_strategic, "derivation file");
  g1->excludes(g2, g3);
  g2->excludes(g3);
  translate->require_option(1);

  std::string path;
  auto* check = app.add_subcommand("check", "validate a game, strategy or derivation file");
  check->add_option("file", path)->required();

  std::vector<std::string> hyps;
  std::string conclusion;
  auto* entail = app.add_subcommand("entail", "decide whether hypotheses entail a conclusion");
  entail->add_option("-H,--hypothesis", hyps, "hypothesis formula (repeatable)")->required();
  entail->add_option("-C,--conclusion", conclusion, "conclusion formula")->required();

  auto* suite = app.add_subcommand("suite", "run an entailment problem file");
  suite->add_option("file", path)->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "start the game server");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*parse) return cmd_parse(text);
    if (*prove_cmd) return cmd_prove(text, strategic_check, o);
    if (*strategy_cmd) return cmd_strategy(text, o);
    if (*translate) return cmd_translate(to_derivation, to_strategy, to_strategic, o);
    if (*check) return cmd_check(path);
    if (*entail) return cmd_entail(hyps, conclusion, o);
    if (*suite) return cmd_suite(path, o);
    if (*serve_cmd) {
      std::cerr << "serving on http://" << host << ":" << port << "/v1\n";
      return serve(host, port, o.limits) ? 0 : kError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
