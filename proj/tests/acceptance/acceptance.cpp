// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "dialogos/entail.hpp"
#include "dialogos/json_io.hpp"
#include "dialogos/translate.hpp"
#include "support/builders.hpp"
#include "support/figure_games.hpp"
#include "support/oracles.hpp"

using namespace dialogos;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// Strategies met along the way, for the fresh-variable lemma.
std::vector<Strategy> corpus_strategies;

bool strategy_sound(const Strategy& s, std::string& why) {
  auto r = validate_strategy(s);
  if (!r.ok) {
    why = "invalid strategy for " + render(s.root) + ": " + r.message;
    return false;
  }
  if (!is_winning(s)) {
    why = "strategy for " + render(s.root) + " is not winning";
    return false;
  }
  return true;
}

bool derivation_sound(const Derivation& d, const Sequent& goal, std::string& why) {
  auto v = validate_derivation(d);
  if (!v.ok) {
    why = "invalid derivation of " + render(goal) + ": " + v.message;
    return false;
  }
  if (!(d.conclusion == goal)) {
    why = "derivation concludes " + render(d.conclusion) + " instead of " + render(goal);
    return false;
  }
  auto st = is_strategic(d);
  if (!st.strategic) {
    why = "non-strategic derivation of " + render(goal) + ": " + st.message;
    return false;
  }
  return true;
}

Outcome figure_reproduction() {
  Outcome o;
  std::ostringstream times;
  for (const char* text : {figure::kLeft, figure::kMiddle, figure::kThird}) {
    auto start = Clock::now();
    auto s = find_winning_strategy(parse_formula(text), {});
    std::string why;
    bool ok = s && strategy_sound(*s, why);
    double t = seconds_since(start);
    times << (times.tellp() > 0 ? ", " : "") << t * 1000 << " ms";
    if (!s) o.fail(std::string("no strategy for ") + text);
    else if (!ok) o.fail(why);
    else if (t >= 1.0) o.fail(std::string("too slow on ") + text);
    if (s) corpus_strategies.push_back(*s);
  }
  if (o.pass) o.detail = "3/3 winning strategies (" + times.str() + ")";
  return o;
}

Outcome fracas_suite(const std::string& path) {
  Outcome o;
  auto start = Clock::now();
  auto summary = run_suite_file(path, {});
  double t = seconds_since(start);
  std::size_t matches = summary.entries.size() - summary.mismatches();
  const std::vector<Answer> expected{Answer::Yes, Answer::Yes, Answer::No, Answer::Unknown};
  if (summary.entries.size() != expected.size()) {
    o.fail("corpus has " + std::to_string(summary.entries.size()) + " problems");
    return o;
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& v = summary.entries[i].verdict;
    if (v.answer != expected[i]) o.fail(summary.entries[i].problem.id + " answered " + to_string(v.answer));
    for (const auto* d : {&v.positive, &v.negative}) {
      if (!d->strategy) continue;
      std::string why;
      if (!strategy_sound(*d->strategy, why)) o.fail(why);
      corpus_strategies.push_back(*d->strategy);
    }
  }
  const auto& last = summary.entries[3].verdict.positive;
  if (!last.certificate) o.fail("no polarity certificate on the last problem");
  else if (last.certificate->predicate != "suedois")
    o.fail("certificate names " + last.certificate->predicate + ", not suedois");
  if (t >= 10.0) o.fail("suite took " + std::to_string(t) + " s");
  if (o.pass) {
    std::ostringstream d;
    d << matches << "/4 match in " << t << " s, certificate on suedois";
    o.detail = d.str();
  }
  return o;
}

// Propositional formulas of depth at most 4 that mostly use the full depth.
Formula deep_propositional(std::mt19937& rng, int depth, const std::vector<std::string>& atoms) {
  std::uniform_int_distribution<std::size_t> pick_atom(0, atoms.size() - 1);
  if (depth == 0 || rng() % 100 < 15) return Formula::atom(atoms[pick_atom(rng)]);
  Formula l = deep_propositional(rng, depth - 1, atoms);
  switch (rng() % 4) {
    case 0: return Formula::conj(l, deep_propositional(rng, depth - 1, atoms));
    case 1: return Formula::disj(l, deep_propositional(rng, depth - 1, atoms));
    case 2: return Formula::implies(l, deep_propositional(rng, depth - 1, atoms));
    default: return Formula::negation(l);
  }
}

Outcome completeness() {
  Outcome o;
  std::mt19937 rng(20240611);
  const std::vector<std::string> atoms{"a", "b", "c"};
  std::size_t valid = 0, disagreements = 0;
  auto start = Clock::now();
  for (int i = 0; i < 500; ++i) {
    Formula f = i % 2 ? deep_propositional(rng, 4, atoms) : oracle::random_propositional(rng, 4, atoms);
    bool oracle_valid = oracle::tautology(f);
    auto s = find_winning_strategy(f, {});
    bool found = s && is_winning(*s);
    valid += oracle_valid;
    if (found != oracle_valid) {
      ++disagreements;
      o.fail("disagreement on " + render(f) + (oracle_valid ? " (valid, no strategy)" : " (invalid, strategy found)"));
    }
  }
  std::ostringstream d;
  if (o.pass) {
    d << "500 sampled formulas (" << valid << " valid), 0 disagreements in " << seconds_since(start) << " s";
    o.detail = d.str();
  } else {
    d << " [" << disagreements << " disagreements]";
    o.detail += d.str();
  }
  return o;
}

Outcome soundness() {
  Outcome o;
  const SearchLimits limits{20, 2, 2, 500};
  std::size_t checked = 0;
  auto check = [&](const Sequent& goal) {
    std::optional<Derivation> d;
    try {
      d = prove(goal, limits);
    } catch (const TimeBudgetExceeded&) {
      return false;
    }
    if (!d) return false;
    std::string why;
    if (!derivation_sound(*d, goal, why)) {
      o.fail(why);
      return true;
    }
    if (goal.left.empty() && goal.right.size() == 1) {
      try {
        Strategy s = derivation_to_strategy(*d);
        if (!strategy_sound(s, why)) o.fail(why);
        bool first_order = !variable_names(s.root).empty();
        if (first_order || corpus_strategies.size() < 200) corpus_strategies.push_back(std::move(s));
      } catch (const TranslationError& e) {
        o.fail(std::string("translation failed on ") + render(goal) + ": " + e.what());
      }
    }
    ++checked;
    return true;
  };

  // Named corpus: the figure formulas and a few textbook sequents.
  std::vector<std::string> corpus{figure::kLeft,
                                  figure::kMiddle,
                                  figure::kThird,
                                  "forall x. c(x) |- exists x. c(x)",
                                  "(a -> b) -> (a -> b)",
                                  "((a -> b) -> a) -> a",
                                  "exists x. forall y. r(x, y) -> forall y. exists x. r(x, y)",
                                  "a | ~a",
                                  "~(a & b) -> ~a | ~b"};
  std::size_t corpus_proved = 0;
  for (const auto& text : corpus) {
    Sequent s;
    if (text.find("|-") != std::string::npos) {
      s = build::seq(text);
    } else {
      s = {{}, {parse_formula(text)}};
    }
    corpus_proved += check(s);
  }
  if (corpus_proved < corpus.size()) o.fail("only " + std::to_string(corpus_proved) + " corpus items proved");

  std::mt19937 rng(99);
  std::size_t proved = 0, attempts = 0;
  std::set<std::string> seen;
  auto start = Clock::now();
  while (proved < 10000 && attempts < 1000000) {
    ++attempts;
    Formula f = attempts % 3 == 0 ? oracle::random_first_order(rng, 3 + attempts % 2)
                                  : deep_propositional(rng, 2 + attempts % 4, {"a", "b", "c", "d"});
    if (!f.free_vars().empty() || !seen.insert(render(f)).second) continue;
    if (check({{}, {f}})) ++proved;
    if (!o.pass) break;
  }
  if (proved < 10000) o.fail("only " + std::to_string(proved) + " provable formulas generated");
  if (o.pass) {
    std::ostringstream d;
    d << checked << " derivations and strategies checked (" << corpus_proved << " corpus, " << proved
      << " distinct fuzzed formulas from " << attempts << " attempts) in " << seconds_since(start) << " s";
    o.detail = d.str();
  }
  return o;
}

Outcome round_trips() {
  Outcome o;
  for (const auto& s : {figure::left_strategy(), figure::middle_strategy(), figure::third_strategy()}) {
    try {
      Derivation d = strategy_to_derivation(s);
      Strategy back = derivation_to_strategy(d);
      std::string why;
      if (!(back.root == s.root)) o.fail("round trip changed the formula " + render(s.root));
      else if (!strategy_sound(back, why)) o.fail(why);
      corpus_strategies.push_back(s);
    } catch (const TranslationError& e) {
      o.fail(std::string("figure round trip: ") + e.what());
    }
  }
  std::mt19937 rng(4242);
  std::size_t done = 0;
  while (done < 100) {
    Formula f = oracle::random_propositional(rng, 4, {"a", "b", "c"});
    auto d = prove({{}, {f}}, {});
    if (!d) continue;
    ++done;
    try {
      Strategy s = derivation_to_strategy(*d);
      Derivation back = strategy_to_derivation(s);
      auto v = validate_derivation(back);
      if (!v.ok) o.fail("invalid derivation after round trip of " + render(f) + ": " + v.message);
      else if (!(back.conclusion == d->conclusion)) o.fail("round trip changed the conclusion of " + render(f));
    } catch (const TranslationError& e) {
      o.fail(std::string("round trip of ") + render(f) + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "3 figure strategies and 100 provable formulas";
  return o;
}

Outcome counterexamples() {
  Outcome o;
  struct Case {
    Derivation d;
    NodePath path;
    const char* rule;
  };
  for (const auto& c : {Case{build::counterexample_exists(), {}, "ExR"},
                        Case{build::counterexample_implication(), {0}, "ImpL"}}) {
    if (!validate_derivation(c.d).ok) o.fail(std::string(c.rule) + " counterexample is not a valid derivation");
    auto st = is_strategic(c.d);
    if (st.strategic) o.fail(std::string(c.rule) + " counterexample accepted as strategic");
    else if (st.path != c.path || st.message.find(c.rule) == std::string::npos)
      o.fail(std::string(c.rule) + " counterexample flagged at " + render(st.path) + ": " + st.message);
    try {
      Derivation fixed = strategize(c.d);
      std::string why;
      if (!derivation_sound(fixed, c.d.conclusion, why)) o.fail(why);
    } catch (const TranslationError& e) {
      o.fail(std::string("strategize failed: ") + e.what());
    }
  }
  if (o.pass) o.detail = "flagged at ExR " + render(NodePath{}) + " and ImpL " + render(NodePath{0}) + "; both strategized";
  return o;
}

Outcome fresh_variable_lemma() {
  Outcome o;
  std::size_t strategies = 0, checked = 0;
  for (const auto& s : corpus_strategies) {
    try {
      auto report = check_fresh_variable_lemma(label_sequents(s));
      ++strategies;
      checked += report.checked;
      if (!report.ok) o.fail("violation in " + render(s.root) + " at " + render(report.strategy_path) + ": " + report.message);
    } catch (const TranslationError& e) {
      o.fail(std::string("labelling failed on ") + render(s.root) + ": " + e.what());
    }
  }
  if (strategies < 10) o.fail("too few strategies in the corpus");
  if (o.pass) {
    std::ostringstream d;
    d << strategies << " strategies, " << checked << " fresh choices, 0 violations";
    o.detail = d.str();
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string data = argc > 1 ? argv[1] : DIALOGOS_DATA_DIR;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"figure strategies", figure_reproduction},
      {"entailment corpus", [&] { return fracas_suite(data + "/fracas_subset.json"); }},
      {"propositional completeness", completeness},
      {"soundness", soundness},
      {"translation round trips", round_trips},
      {"non-strategic counterexamples", counterexamples},
      {"fresh-variable lemma", fresh_variable_lemma},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
