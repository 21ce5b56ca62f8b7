#include "dialogos/entail.hpp"

#include <sstream>
#include <stdexcept>

#include "dialogos/translate.hpp"

namespace dialogos {

const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Unknown: return "unknown";
  }
  return "?";
}

std::optional<Answer> answer_from_string(const std::string& s) {
  if (s == "yes") return Answer::Yes;
  if (s == "no") return Answer::No;
  if (s == "unknown") return Answer::Unknown;
  return std::nullopt;
}

const char* to_string(Direction d) { return d == Direction::Positive ? "positive" : "negative"; }

const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::WinningStrategy: return "winning-strategy";
    case Evidence::RefutingStrategy: return "refuting-strategy";
    case Evidence::PolarityCertificate: return "polarity-certificate";
    case Evidence::BoundsExhausted: return "bounds-exhausted";
  }
  return "?";
}

Problem make_problem(const std::string& id, const std::vector<std::string>& hypotheses,
                     const std::string& conclusion) {
  if (hypotheses.empty()) throw std::invalid_argument("problem " + id + " has no hypotheses");
  Signature sig;
  auto closed = [&](const std::string& text) {
    Formula f = parse_formula(text, sig);
    if (!f.free_vars().empty())
      throw std::invalid_argument("problem " + id + ": formula " + render(f) + " has free variable " +
                                  f.free_vars().front());
    return f;
  };
  Problem p{id, {}, closed(conclusion), std::nullopt, {}};
  for (const auto& h : hypotheses) p.hypotheses.push_back(closed(h));
  return p;
}

Formula build_formula(const Problem& p, Direction d) {
  Formula h = p.hypotheses.back();
  for (std::size_t i = p.hypotheses.size() - 1; i-- > 0;) h = Formula::conj(p.hypotheses[i], h);
  Formula c = d == Direction::Positive ? p.conclusion : Formula::negation(p.conclusion);
  return Formula::implies(h, c);
}

namespace {

// A formula after partial evaluation: a truth value or a residual formula.
struct Folded {
  std::optional<bool> value;
  std::optional<Formula> rest;
};

Folded fold(const Formula& f, const std::map<std::string, bool>& fixed) {
  auto known = [](bool b) { return Folded{b, std::nullopt}; };
  switch (f.kind()) {
    case Connective::Bottom: return known(false);
    case Connective::Atom: {
      auto it = fixed.find(f.predicate());
      if (it != fixed.end()) return known(it->second);
      return {std::nullopt, f};
    }
    case Connective::And: {
      Folded l = fold(f.left(), fixed), r = fold(f.right(), fixed);
      if ((l.value && !*l.value) || (r.value && !*r.value)) return known(false);
      if (l.value) return r;
      if (r.value) return l;
      return {std::nullopt, Formula::conj(*l.rest, *r.rest)};
    }
    case Connective::Or: {
      Folded l = fold(f.left(), fixed), r = fold(f.right(), fixed);
      if ((l.value && *l.value) || (r.value && *r.value)) return known(true);
      if (l.value) return r;
      if (r.value) return l;
      return {std::nullopt, Formula::disj(*l.rest, *r.rest)};
    }
    case Connective::Implies: {
      Folded l = fold(f.left(), fixed), r = fold(f.right(), fixed);
      if ((l.value && !*l.value) || (r.value && *r.value)) return known(true);
      if (l.value) return r;  // true -> r
      if (r.value) return {std::nullopt, Formula::negation(*l.rest)};
      return {std::nullopt, Formula::implies(*l.rest, *r.rest)};
    }
    case Connective::Forall:
    case Connective::Exists: {
      // Over a nonempty domain a closed truth value passes through.
      Folded b = fold(f.body(), fixed);
      if (b.value) return b;
      return {std::nullopt, f.kind() == Connective::Forall ? Formula::forall(f.bound_var(), *b.rest)
                                                           : Formula::exists(f.bound_var(), *b.rest)};
    }
  }
  return {std::nullopt, f};
}

bool occurs(const Formula& f, const std::string& predicate) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Bottom: return f.predicate() == predicate;
    case Connective::Forall:
    case Connective::Exists: return occurs(f.body(), predicate);
    default: return occurs(f.left(), predicate) || occurs(f.right(), predicate);
  }
}

}  // namespace

std::optional<PolarityCertificate> polarity_precheck(const Formula& f) {
  std::map<std::string, bool> fixed;
  std::vector<std::string> order;
  Formula current = f;
  for (;;) {
    Folded r = fold(current, fixed);
    if (r.value) {
      if (*r.value) return std::nullopt;
      break;
    }
    current = *r.rest;
    bool progress = false;
    for (const auto& [name, pol] : polarity_table(current)) {
      if (name == kBottomName || fixed.count(name) || pol.both() || !occurs(current, name)) continue;
      if (!pol.positive && !pol.negative) continue;
      fixed[name] = pol.negative;  // positive-only -> false, negative-only -> true
      order.push_back(name);
      progress = true;
    }
    if (!progress) return std::nullopt;
  }

  PolarityCertificate cert;
  cert.assignment = fixed;
  cert.predicate = order.empty() ? std::string(kBottomName) : order.front();
  for (const auto& name : order)
    if (!fixed[name]) {
      cert.predicate = name;
      break;
    }
  std::ostringstream why;
  why << cert.predicate << " does not occur both positively and negatively; fixing one-polarity predicates (";
  bool first = true;
  for (const auto& name : order) {
    why << (first ? "" : ", ") << name << "=" << (fixed[name] ? "true" : "false");
    first = false;
  }
  why << ") makes the formula false in every interpretation over a nonempty domain";
  cert.reason = why.str();
  return cert;
}

namespace {

DirectionResult run_direction(const Problem& p, Direction d, const SearchLimits& limits) {
  DirectionResult r{d, build_formula(p, d), std::nullopt, std::nullopt, false};
  r.certificate = polarity_precheck(r.formula);
  if (r.certificate) return r;
  try {
    auto s = find_winning_strategy(r.formula, limits);
    if (s && is_winning(*s)) r.strategy = std::move(s);
  } catch (const TimeBudgetExceeded&) {
    r.timed_out = true;
  }
  return r;
}

}  // namespace

Verdict decide(const Problem& p, const SearchLimits& limits) {
  DirectionResult pos = run_direction(p, Direction::Positive, limits);
  DirectionResult neg = run_direction(p, Direction::Negative, limits);
  Verdict v{Answer::Unknown, Evidence::BoundsExhausted, pos, neg, false, pos.timed_out || neg.timed_out};
  if (pos.strategy && neg.strategy) {
    v.inconsistent = true;
  } else if (pos.strategy) {
    v.answer = Answer::Yes;
    v.evidence = Evidence::WinningStrategy;
  } else if (neg.strategy) {
    v.answer = Answer::No;
    v.evidence = Evidence::RefutingStrategy;
  } else if (pos.certificate || neg.certificate) {
    v.evidence = Evidence::PolarityCertificate;
  }
  return v;
}

std::size_t SuiteSummary::mismatches() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.matches() ? 0 : 1;
  return n;
}

SuiteSummary run_suite(const std::vector<Problem>& problems, const SearchLimits& limits) {
  SuiteSummary s;
  for (const auto& p : problems) s.entries.push_back({p, decide(p, limits)});
  return s;
}

}  // namespace dialogos
