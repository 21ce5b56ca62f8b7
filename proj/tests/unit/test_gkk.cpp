#include <random>

#include "doctest.h"
#include "dialogos/gkk.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace dialogos;
using build::node;
using build::seq;

namespace {

std::vector<Formula> small_formulas(int depth) {
  std::vector<Formula> out{Formula::atom("a"), Formula::atom("b"), Formula::atom("c")};
  for (int d = 1; d <= depth; ++d) {
    std::vector<Formula> next = out;
    for (const auto& l : out) {
      next.push_back(Formula::negation(l));
      for (const auto& r : out) {
        if (l.depth() + 1 < static_cast<std::size_t>(d) && r.depth() + 1 < static_cast<std::size_t>(d))
          continue;  // already generated at a lower level
        next.push_back(Formula::conj(l, r));
        next.push_back(Formula::disj(l, r));
        next.push_back(Formula::implies(l, r));
      }
    }
    out = std::move(next);
  }
  return out;
}

void require_sound(const Derivation& d, const Sequent& goal) {
  auto v = validate_derivation(d);
  REQUIRE_MESSAGE(v.ok, v.message);
  auto st = is_strategic(d);
  REQUIRE_MESSAGE(st.strategic, st.message);
  REQUIRE(d.conclusion == goal);
}

}  // namespace

TEST_CASE("axiom derivation validates") {
  auto d = node("a, b |- a, c", Rule::Id, Side::R, 0);
  CHECK(validate_derivation(d).ok);
  auto bad = node("b |- a", Rule::Id, Side::R, 0);
  CHECK_FALSE(validate_derivation(bad).ok);
}

TEST_CASE("premise multisets must match the rule schema exactly") {
  // AndL1 must retain the conjunction.
  auto id = node("a |- a", Rule::Id, Side::R, 0);
  auto wrong = node("a & b |- a", Rule::AndL1, Side::L, 0, {id});
  auto rep = validate_derivation(wrong);
  CHECK_FALSE(rep.ok);
  CHECK(rep.path.empty());
  auto id2 = node("a & b, a |- a", Rule::Id, Side::R, 0);
  CHECK(validate_derivation(node("a & b |- a", Rule::AndL1, Side::L, 0, {id2})).ok);
}

TEST_CASE("the existential counterexample is valid but not strategic") {
  auto d = build::counterexample_exists();
  CHECK(validate_derivation(d).ok);
  auto st = is_strategic(d);
  CHECK_FALSE(st.strategic);
  CHECK(st.path.empty());
  CHECK(st.message.find("ExR") != std::string::npos);
}

TEST_CASE("the implication counterexample is valid but not strategic") {
  auto d = build::counterexample_implication();
  auto rep = validate_derivation(d);
  CHECK_MESSAGE(rep.ok, rep.message);
  auto st = is_strategic(d);
  CHECK_FALSE(st.strategic);
  CHECK(st.path == NodePath{0});
  CHECK(st.message.find("ImpL") != std::string::npos);
}

TEST_CASE("eigenvariable condition") {
  auto id = node("p(y) |- p(y)", Rule::Id, Side::R, 0);
  auto d = node("p(y) |- forall x. p(x)", Rule::AllR, Side::R, 0, {id}, {}, "y");
  auto rep = validate_derivation(d);
  CHECK_FALSE(rep.ok);
  CHECK(rep.message.find("eigenvariable") != std::string::npos);
  auto id2 = node("p(y) |- p(z)", Rule::Id, Side::R, 0);
  auto ok = node("p(y) |- forall x. p(x)", Rule::AllR, Side::R, 0, {id2}, {}, "z");
  CHECK(validate_derivation(ok).ok == false);  // p(y) |- p(z) is no axiom
  CHECK(validate_derivation(ok).path == NodePath{0});
}

TEST_CASE("term universe") {
  auto u = term_universe(seq("forall x. a(x) |- exists x. a(x)"), 0);
  REQUIRE(u.size() == 1);
  CHECK(u[0] == Term::var("v0"));
  auto w = term_universe(seq("a(c, f(c)) |- _|_"), 1);
  REQUIRE(w.size() == 3);
  CHECK(render(w[0]) == "c");
  CHECK(render(w[1]) == "f(c)");
  CHECK(render(w[2]) == "v0");

  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    Sequent s{{oracle::random_first_order(rng, 3)}, {oracle::random_first_order(rng, 3)}};
    auto t = term_universe(s, 2);
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b) CHECK_FALSE(t[a] == t[b]);
  }
}

TEST_CASE("prover on the figure formulas") {
  SearchLimits limits;
  for (const char* text : {"forall x. (a(x) & b(x)) -> (forall x. a(x)) & (forall x. b(x))",
                           "exists x. (a(x) -> forall y. a(y))", "forall x. a(x) | exists x. ~a(x)",
                           "forall x. c(x) |- exists x. c(x)"}) {
    Sequent goal = seq(text);
    auto d = prove(goal, limits);
    REQUIRE_MESSAGE(d, text);
    require_sound(*d, goal);
  }
  CHECK_FALSE(prove(seq("a -> b"), limits));
  CHECK_FALSE(prove(seq("a & ~a"), limits));
}

TEST_CASE("propositional completeness, exhaustive to depth 2") {
  SearchLimits limits;
  auto formulas = small_formulas(2);
  CHECK(formulas.size() > 3000);
  int valid = 0;
  for (const auto& f : formulas) {
    Sequent goal{{}, {f}};
    auto d = prove(goal, limits);
    bool taut = oracle::tautology(f);
    REQUIRE_MESSAGE(d.has_value() == taut, render(f));
    if (d) {
      ++valid;
      require_sound(*d, goal);
    }
  }
  CHECK(valid > 0);
}

TEST_CASE("limits are monotone on a sample") {
  std::mt19937 rng(21);
  SearchLimits small{12, 1, 1, 5000};
  SearchLimits big{40, 3, 3, 5000};
  for (int i = 0; i < 200; ++i) {
    Formula f = oracle::random_first_order(rng, 3);
    Sequent goal{{}, {f}};
    if (prove(goal, small)) CHECK_MESSAGE(prove(goal, big).has_value(), render(f));
  }
}
