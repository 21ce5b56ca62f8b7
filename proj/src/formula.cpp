#include "dialogos/formula.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dialogos {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t str_hash(const std::string& s) { return std::hash<std::string>{}(s); }

using Names = std::vector<std::string>;

void merge_into(Names& out, const Names& in) {
  Names merged;
  merged.reserve(out.size() + in.size());
  std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged));
  out.swap(merged);
}

}  // namespace

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  bool is_var = false;
  std::string name;
  std::vector<Term> args;
  std::size_t hash = 0;
  Names free;  // sorted
};

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->hash = mix(0x51, str_hash(name));
  n->free = {name};
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::app(std::string function, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  std::size_t h = mix(0x77, str_hash(function));
  for (const auto& a : args) {
    h = mix(h, a.hash());
    merge_into(n->free, a.node_->free);
  }
  n->hash = h;
  n->name = std::move(function);
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::is_var() const { return node_->is_var; }
const std::string& Term::name() const { return node_->name; }
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_->hash; }
const std::vector<std::string>& Term::variables() const { return node_->free; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->is_var != b.node_->is_var ||
      a.node_->name != b.node_->name || a.node_->args.size() != b.node_->args.size())
    return false;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  collect_variable_names(t, out);
  return out;
}

void collect_variable_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.variables().begin(), t.variables().end());
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Connective kind = Connective::Atom;
  std::string name;  // predicate or bound variable
  std::vector<Term> args;
  std::vector<Formula> children;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
  Names free;  // sorted
};

namespace {

// Hash of a term where variables bound by the surrounding binders (innermost
// last in `env`) contribute their de Bruijn index instead of their name.
std::size_t term_hash_env(const Term& t, const Names& env) {
  if (t.is_var()) {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i] == t.name()) return mix(0xb0, env.size() - 1 - i);
    return t.hash();
  }
  std::size_t h = mix(0x77, str_hash(t.name()));
  for (const auto& a : t.args()) h = mix(h, term_hash_env(a, env));
  return h;
}

bool term_mentions(const Term& t, const Names& env) {
  for (const auto& v : t.variables())
    if (std::find(env.begin(), env.end(), v) != env.end()) return true;
  return false;
}

}  // namespace

// The formula hash needs binder context, so quantified nodes re-hash their
// body. This is quadratic in nesting depth, which stays small in practice.
static std::size_t formula_hash_env(const Formula& f, Names& env) {
  switch (f.kind()) {
    case Connective::Atom: {
      bool closed_over = false;
      for (const auto& a : f.args())
        if (term_mentions(a, env)) closed_over = true;
      if (!closed_over) return f.hash();
      std::size_t h = mix(0x11, str_hash(f.predicate()));
      for (const auto& a : f.args()) h = mix(h, term_hash_env(a, env));
      return h;
    }
    case Connective::Bottom:
      return f.hash();
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      return mix(mix(static_cast<std::size_t>(f.kind()) * 0x101, formula_hash_env(f.left(), env)),
                 formula_hash_env(f.right(), env));
    case Connective::Forall:
    case Connective::Exists: {
      env.push_back(f.bound_var());
      std::size_t h = mix(static_cast<std::size_t>(f.kind()) * 0x101, formula_hash_env(f.body(), env));
      env.pop_back();
      return h;
    }
  }
  return 0;
}

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  if (predicate == kBottomName && args.empty()) return bottom();
  auto n = std::make_shared<Node>();
  n->kind = Connective::Atom;
  std::size_t h = mix(0x11, str_hash(predicate));
  for (const auto& a : args) {
    h = mix(h, a.hash());
    merge_into(n->free, a.variables());
  }
  n->hash = h;
  n->name = std::move(predicate);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::bottom() {
  static const Formula b = [] {
    auto n = std::make_shared<Node>();
    n->kind = Connective::Bottom;
    n->name = kBottomName;
    n->hash = mix(0x11, str_hash(kBottomName));
    return Formula(std::move(n));
  }();
  return b;
}

Formula Formula::make_binary(Connective k, Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->hash = mix(mix(static_cast<std::size_t>(k) * 0x101, l.hash()), r.hash());
  n->size = 1 + l.size() + r.size();
  n->depth = 1 + std::max(l.depth(), r.depth());
  n->free = l.node_->free;
  merge_into(n->free, r.node_->free);
  n->children = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::conj(Formula l, Formula r) { return make_binary(Connective::And, std::move(l), std::move(r)); }
Formula Formula::disj(Formula l, Formula r) { return make_binary(Connective::Or, std::move(l), std::move(r)); }
Formula Formula::implies(Formula l, Formula r) {
  return make_binary(Connective::Implies, std::move(l), std::move(r));
}

Formula Formula::make_quantifier(Connective k, std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->size = 1 + body.size();
  n->depth = 1 + body.depth();
  n->free = body.node_->free;
  n->free.erase(std::remove(n->free.begin(), n->free.end(), var), n->free.end());
  n->name = std::move(var);
  n->children = {std::move(body)};
  Formula f(n);
  Names env;
  n->hash = formula_hash_env(f, env);
  return f;
}

Formula Formula::forall(std::string var, Formula body) {
  return make_quantifier(Connective::Forall, std::move(var), std::move(body));
}
Formula Formula::exists(std::string var, Formula body) {
  return make_quantifier(Connective::Exists, std::move(var), std::move(body));
}

Connective Formula::kind() const { return node_->kind; }
bool Formula::is_atomic() const {
  return node_->kind == Connective::Atom || node_->kind == Connective::Bottom;
}
bool Formula::is_binary() const {
  return node_->kind == Connective::And || node_->kind == Connective::Or ||
         node_->kind == Connective::Implies;
}
bool Formula::is_quantifier() const {
  return node_->kind == Connective::Forall || node_->kind == Connective::Exists;
}
bool Formula::is_negation() const {
  return node_->kind == Connective::Implies && node_->children[1].kind() == Connective::Bottom;
}

const std::string& Formula::predicate() const { return node_->name; }
std::span<const Term> Formula::args() const { return node_->args; }
const Formula& Formula::left() const { return node_->children.at(0); }
const Formula& Formula::right() const { return node_->children.at(1); }
const std::string& Formula::bound_var() const { return node_->name; }
const Formula& Formula::body() const { return node_->children.at(0); }
std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::depth() const { return node_->depth; }
const std::vector<std::string>& Formula::free_vars() const { return node_->free; }

namespace {

struct AlphaEnv {
  Names a, b;
};

// Index of the innermost binder named `v`, counted from the innermost.
std::optional<std::size_t> bound_index(const Names& env, const std::string& v) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == v) return env.size() - 1 - i;
  return std::nullopt;
}

bool term_alpha_eq(const Term& x, const Term& y, const AlphaEnv& env) {
  if (x.is_var() != y.is_var()) return false;
  if (x.is_var()) {
    auto ix = bound_index(env.a, x.name());
    auto iy = bound_index(env.b, y.name());
    if (ix || iy) return ix == iy;
    return x.name() == y.name();
  }
  if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
  for (std::size_t i = 0; i < x.args().size(); ++i)
    if (!term_alpha_eq(x.args()[i], y.args()[i], env)) return false;
  return true;
}

bool alpha_eq(const Formula& x, const Formula& y, AlphaEnv& env) {
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Connective::Bottom:
      return true;
    case Connective::Atom:
      if (x.predicate() != y.predicate() || x.args().size() != y.args().size()) return false;
      for (std::size_t i = 0; i < x.args().size(); ++i)
        if (!term_alpha_eq(x.args()[i], y.args()[i], env)) return false;
      return true;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      return alpha_eq(x.left(), y.left(), env) && alpha_eq(x.right(), y.right(), env);
    case Connective::Forall:
    case Connective::Exists: {
      env.a.push_back(x.bound_var());
      env.b.push_back(y.bound_var());
      bool ok = alpha_eq(x.body(), y.body(), env);
      env.a.pop_back();
      env.b.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  AlphaEnv env;
  return alpha_eq(a, b, env);
}

bool Formula::identical(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || node_->name != other.node_->name) return false;
  if (kind() == Connective::Atom) {
    if (args().size() != other.args().size()) return false;
    for (std::size_t i = 0; i < args().size(); ++i)
      if (!(args()[i] == other.args()[i])) return false;
    return true;
  }
  if (node_->children.size() != other.node_->children.size()) return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i)
    if (!node_->children[i].identical(other.node_->children[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Variables and substitution

std::set<std::string> free_variables(const Formula& f) {
  return {f.free_vars().begin(), f.free_vars().end()};
}

std::set<std::string> variable_names(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    switch (g.kind()) {
      case Connective::Bottom:
        return;
      case Connective::Atom:
        for (const auto& a : g.args()) collect_variable_names(a, out);
        return;
      case Connective::And:
      case Connective::Or:
      case Connective::Implies:
        go(g.left());
        go(g.right());
        return;
      case Connective::Forall:
      case Connective::Exists:
        out.insert(g.bound_var());
        go(g.body());
        return;
    }
  };
  go(f);
  return out;
}

Term substitute(const Term& t, const Substitution& s) {
  if (s.empty()) return t;
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(substitute(a, s));
    if (!(args.back() == a)) changed = true;
  }
  return changed ? Term::app(t.name(), std::move(args)) : t;
}

Formula substitute(const Formula& f, const Substitution& s) {
  if (s.empty()) return f;
  bool relevant = false;
  for (const auto& v : f.free_vars())
    if (s.count(v)) relevant = true;
  if (!relevant) return f;
  switch (f.kind()) {
    case Connective::Bottom:
      return f;
    case Connective::Atom: {
      std::vector<Term> args;
      for (const auto& a : f.args()) args.push_back(substitute(a, s));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case Connective::And:
      return Formula::conj(substitute(f.left(), s), substitute(f.right(), s));
    case Connective::Or:
      return Formula::disj(substitute(f.left(), s), substitute(f.right(), s));
    case Connective::Implies:
      return Formula::implies(substitute(f.left(), s), substitute(f.right(), s));
    case Connective::Forall:
    case Connective::Exists: {
      const std::string& x = f.bound_var();
      const auto& bf = f.body().free_vars();
      std::set<std::string> body_free(bf.begin(), bf.end());
      Substitution inner;
      std::set<std::string> introduced;
      for (const auto& [v, t] : s) {
        if (v == x || !body_free.count(v)) continue;
        inner.emplace(v, t);
        collect_variable_names(t, introduced);
      }
      if (inner.empty()) return f;
      std::string y = x;
      if (introduced.count(x)) {
        do {
          y += '\'';
        } while (introduced.count(y) || body_free.count(y));
        inner.insert_or_assign(x, Term::var(y));
      }
      Formula body = substitute(f.body(), inner);
      return f.kind() == Connective::Forall ? Formula::forall(y, std::move(body))
                                            : Formula::exists(y, std::move(body));
    }
  }
  return f;
}

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  return substitute(f, Substitution{{var, t}});
}

Formula instantiate(const Formula& quantified, const Term& t) {
  if (!quantified.is_quantifier()) throw std::invalid_argument("instantiate: not a quantifier");
  return substitute(quantified.body(), quantified.bound_var(), t);
}

namespace {

struct Matcher {
  const std::set<std::string>& pvars;
  Substitution bindings;
  AlphaEnv env;

  bool term(const Term& p, const Term& c) {
    if (p.is_var() && !bound_index(env.a, p.name()) && pvars.count(p.name())) {
      // Schematic: the candidate term must not mention locally bound names.
      if (term_mentions(c, env.b)) return false;
      auto it = bindings.find(p.name());
      if (it == bindings.end()) {
        bindings.emplace(p.name(), c);
        return true;
      }
      return it->second == c;
    }
    if (p.is_var() != c.is_var()) return false;
    if (p.is_var()) {
      auto ip = bound_index(env.a, p.name());
      auto ic = bound_index(env.b, c.name());
      if (ip || ic) return ip == ic;
      return p.name() == c.name();
    }
    if (p.name() != c.name() || p.args().size() != c.args().size()) return false;
    for (std::size_t i = 0; i < p.args().size(); ++i)
      if (!term(p.args()[i], c.args()[i])) return false;
    return true;
  }

  bool formula(const Formula& p, const Formula& c) {
    if (p.kind() != c.kind()) return false;
    switch (p.kind()) {
      case Connective::Bottom:
        return true;
      case Connective::Atom:
        if (p.predicate() != c.predicate() || p.args().size() != c.args().size()) return false;
        for (std::size_t i = 0; i < p.args().size(); ++i)
          if (!term(p.args()[i], c.args()[i])) return false;
        return true;
      case Connective::And:
      case Connective::Or:
      case Connective::Implies:
        return formula(p.left(), c.left()) && formula(p.right(), c.right());
      case Connective::Forall:
      case Connective::Exists: {
        env.a.push_back(p.bound_var());
        env.b.push_back(c.bound_var());
        bool ok = formula(p.body(), c.body());
        env.a.pop_back();
        env.b.pop_back();
        return ok;
      }
    }
    return false;
  }
};

}  // namespace

std::optional<Substitution> match_pattern(const Formula& pattern,
                                          const std::set<std::string>& pattern_vars,
                                          const Formula& candidate) {
  Matcher m{pattern_vars, {}, {}};
  if (!m.formula(pattern, candidate)) return std::nullopt;
  return m.bindings;
}

std::optional<std::optional<Term>> match_instance(const Formula& body, const std::string& var,
                                                  const Formula& candidate) {
  std::set<std::string> pv{var};
  auto m = match_pattern(body, pv, candidate);
  if (!m) return std::nullopt;
  auto it = m->find(var);
  if (it == m->end()) return std::optional<Term>{};
  return std::optional<Term>{it->second};
}

void collect_subterms(const Term& t, std::vector<Term>& out) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const auto& a : t.args()) collect_subterms(a, out);
}

namespace {
void free_subterms(const Term& t, const Names& env, std::vector<Term>& out) {
  if (!term_mentions(t, env)) {
    collect_subterms(t, out);
    return;
  }
  for (const auto& a : t.args()) free_subterms(a, env, out);
}

void free_subterms(const Formula& f, Names& env, std::vector<Term>& out) {
  switch (f.kind()) {
    case Connective::Bottom:
      return;
    case Connective::Atom:
      for (const auto& a : f.args()) free_subterms(a, env, out);
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      free_subterms(f.left(), env, out);
      free_subterms(f.right(), env, out);
      return;
    case Connective::Forall:
    case Connective::Exists:
      env.push_back(f.bound_var());
      free_subterms(f.body(), env, out);
      env.pop_back();
      return;
  }
}
}  // namespace

void collect_free_subterms(const Formula& f, std::vector<Term>& out) {
  Names env;
  free_subterms(f, env, out);
}

std::string enumerated_variable(std::size_t i) { return "v" + std::to_string(i); }

std::string first_fresh_variable(const std::set<std::string>& used) {
  for (std::size_t i = 0;; ++i) {
    std::string v = enumerated_variable(i);
    if (!used.count(v)) return v;
  }
}

// ---------------------------------------------------------------------------
// Occurrences and polarity

std::optional<Formula> subformula_at(const Formula& f, const OccurrencePath& path) {
  Formula cur = f;
  for (Step s : path) {
    switch (s) {
      case Step::Left:
      case Step::Right:
        if (!cur.is_binary()) return std::nullopt;
        cur = s == Step::Left ? cur.left() : cur.right();
        break;
      case Step::Body:
        if (!cur.is_quantifier()) return std::nullopt;
        cur = cur.body();
        break;
    }
  }
  return cur;
}

std::vector<AtomOccurrence> atom_occurrences(const Formula& f) {
  std::vector<AtomOccurrence> out;
  OccurrencePath path;
  std::function<void(const Formula&, bool)> go = [&](const Formula& g, bool positive) {
    switch (g.kind()) {
      case Connective::Atom:
      case Connective::Bottom:
        out.push_back({path, g, positive});
        return;
      case Connective::And:
      case Connective::Or:
      case Connective::Implies:
        path.push_back(Step::Left);
        go(g.left(), g.kind() == Connective::Implies ? !positive : positive);
        path.back() = Step::Right;
        go(g.right(), positive);
        path.pop_back();
        return;
      case Connective::Forall:
      case Connective::Exists:
        path.push_back(Step::Body);
        go(g.body(), positive);
        path.pop_back();
        return;
    }
  };
  go(f, true);
  return out;
}

PolarityTable polarity_table(const Formula& f) {
  PolarityTable table;
  table[kBottomName];
  for (const auto& occ : atom_occurrences(f)) {
    auto& e = table[occ.atom.predicate()];
    (occ.positive ? e.positive : e.negative) = true;
  }
  return table;
}

}  // namespace dialogos
