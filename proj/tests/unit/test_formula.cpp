#include <random>

#include "doctest.h"
#include "dialogos/formula.hpp"
#include "support/oracles.hpp"

using namespace dialogos;

TEST_CASE("parse respects precedence and desugars negation") {
  Formula f = parse_formula("a & b -> c");
  CHECK(f.identical(Formula::implies(Formula::conj(Formula::atom("a"), Formula::atom("b")),
                                     Formula::atom("c"))));

  Formula n = parse_formula("~a(x)");
  CHECK(n.identical(Formula::implies(Formula::atom("a", {Term::var("x")}), Formula::bottom())));

  Formula g = parse_formula("forall x. a(x) | exists x. ~a(x)");
  Formula ax = Formula::atom("a", {Term::var("x")});
  CHECK(g.identical(Formula::disj(Formula::forall("x", ax),
                                  Formula::exists("x", Formula::negation(ax)))));

  CHECK(parse_formula("a -> b -> c").identical(
      Formula::implies(Formula::atom("a"), Formula::implies(Formula::atom("b"), Formula::atom("c")))));
  CHECK(parse_formula("false").kind() == Connective::Bottom);
  CHECK(parse_formula("_|_ -> a").left().kind() == Connective::Bottom);
}

TEST_CASE("free identifiers: u..z are variables, others constants") {
  Formula f = parse_formula("r(x, c)");
  CHECK(f.args()[0].is_var());
  CHECK_FALSE(f.args()[1].is_var());
  Formula g = parse_formula("forall c. r(c, c)");
  CHECK(g.body().args()[0].is_var());
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_formula("a & & b");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_formula("p(a) & p(a,b)"), ParseError);
  CHECK_THROWS_AS(parse_formula("p(f(a)) & q(f(a,b))"), ParseError);
  CHECK_THROWS_AS(parse_formula("(a"), ParseError);
  CHECK_THROWS_AS(parse_formula("a $ b"), ParseError);
}

TEST_CASE("render basics") {
  CHECK(render(Formula::atom("a")) == "a");
  CHECK(render(Formula::negation(Formula::atom("a"))) == "~a");
  CHECK(render(parse_formula("(a -> b) -> c")) == "(a -> b) -> c");
  CHECK(render(parse_formula("exists x. (a(x) -> forall y. a(y))")) ==
        "exists x. (a(x) -> forall y. a(y))");
  CHECK(parse_formula("forall x. a(x) -> b").kind() == Connective::Implies);
  CHECK(render(parse_formula("~forall x. ~a(x)")) == "~forall x. ~a(x)");
}

TEST_CASE("render then parse is the identity on random formulas") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Formula f = oracle::random_first_order(rng, 6);
    Formula back = parse_formula(render(f));
    REQUIRE_MESSAGE(back.identical(f), render(f));
  }
}

TEST_CASE("alpha equivalence and hashing") {
  Formula a = parse_formula("forall x. exists y. r(x,y)");
  Formula b = parse_formula("forall z. exists w. r(z,w)");
  Formula c = parse_formula("forall z. exists w. r(w,z)");
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK_FALSE(a == c);
  CHECK_FALSE(parse_formula("forall x. r(x,y)") == parse_formula("forall y. r(y,y)"));
}

TEST_CASE("substitution") {
  Term c = Term::app("c");
  CHECK(substitute(parse_formula("a(x)"), "x", c).identical(parse_formula("a(c)")));
  Formula fa = parse_formula("forall x. a(x)");
  CHECK(substitute(fa, "x", c).identical(fa));

  Formula ex = Formula::exists("y", Formula::atom("r", {Term::var("x"), Term::var("y")}));
  Term fy = Term::app("f", {Term::var("y")});
  Formula out = substitute(ex, "x", fy);
  CHECK(out.identical(Formula::exists("y'", Formula::atom("r", {fy, Term::var("y'")}))));
}

TEST_CASE("substitution agrees with a nameless reference") {
  std::mt19937 rng(11);
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  for (int i = 0; i < 2000; ++i) {
    Formula f = oracle::random_first_order(rng, 5);
    Term t = oracle::random_term(rng, 2, vars);
    std::string x = vars[rng() % vars.size()];
    auto expected = oracle::db_subst(oracle::to_db(f), x, oracle::to_db(t, {}));
    REQUIRE_MESSAGE(oracle::to_db(substitute(f, x, t)) == expected, render(f));
  }
}

TEST_CASE("free variables") {
  CHECK(free_variables(parse_formula("forall x. a(x)")).empty());
  CHECK(free_variables(parse_formula("a(x,y)")) == std::set<std::string>{"x", "y"});
  CHECK(free_variables(parse_formula("(forall x. r(x,y)) -> r(x,x)")) ==
        std::set<std::string>{"x", "y"});
}

TEST_CASE("instance matching") {
  Formula body = parse_formula("r(x, c)");
  auto m = match_instance(body, "x", parse_formula("r(f(c), c)"));
  REQUIRE(m);
  REQUIRE(*m);
  CHECK(**m == Term::app("f", {Term::app("c")}));
  CHECK_FALSE(match_instance(body, "x", parse_formula("r(c, d)")));
  // The witness may not capture a variable bound in the candidate.
  Formula q = parse_formula("forall y. r(x, y)");
  CHECK(match_instance(q.body(), "x", parse_formula("r(y, y)")).has_value());
  CHECK_FALSE(match_instance(Formula::forall("y", q.body()), "x", parse_formula("forall y. r(y, y)")));
}

TEST_CASE("polarity table") {
  auto t = polarity_table(parse_formula("a -> b"));
  CHECK(t["a"].negative);
  CHECK_FALSE(t["a"].positive);
  CHECK(t["b"].positive);
  CHECK_FALSE(t["b"].negative);
  CHECK(t.count("_|_"));

  auto d = polarity_table(parse_formula("exists x. (a(x) -> forall y. a(y))"));
  CHECK(d["a"].both());

  Formula f = parse_formula(
      "(exists x. exists y. (scandinave(x) & (prix_Nobel(y) & gagner(x,y)))) & "
      "(forall u. (suedois(u) -> scandinave(u))) -> "
      "exists w. exists z. (suedois(w) & (prix_Nobel(z) & gagner(w,z)))");
  auto p = polarity_table(f);
  CHECK(p["suedois"].positive);
  CHECK_FALSE(p["suedois"].negative);
  CHECK(p["prix_Nobel"].both());
  CHECK(p["gagner"].both());
  CHECK(p["scandinave"].negative);
  CHECK_FALSE(p["scandinave"].positive);
}

TEST_CASE("negation flips every predicate and marks bottom positive") {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_first_order(rng, 4);
    auto t = polarity_table(f);
    auto n = polarity_table(Formula::negation(f));
    CHECK(n["_|_"].positive);
    for (const auto& [pred, e] : t) {
      if (pred == "_|_") continue;
      CHECK(n[pred].positive == e.negative);
      CHECK(n[pred].negative == e.positive);
    }
  }
}

TEST_CASE("predicate polarity abstraction is sound for structural occurrences") {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_first_order(rng, 5);
    auto table = polarity_table(f);
    for (const auto& occ : atom_occurrences(f)) {
      const auto& e = table[occ.atom.predicate()];
      CHECK((occ.positive ? e.positive : e.negative));
      auto at = subformula_at(f, occ.path);
      REQUIRE(at);
      CHECK(at->identical(occ.atom));
    }
  }
}

TEST_CASE("sequent text") {
  auto [l, r] = parse_sequent_text("forall x. c(x) |- exists x. c(x)");
  CHECK(l.size() == 1);
  CHECK(r.size() == 1);
  auto [l2, r2] = parse_sequent_text("a, b |- ");
  CHECK(l2.size() == 2);
  CHECK(r2.empty());
  auto [l3, r3] = parse_sequent_text("a -> a");
  CHECK(l3.empty());
  CHECK(r3.size() == 1);
}
