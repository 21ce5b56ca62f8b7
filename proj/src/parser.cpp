#include <cctype>
#include <sstream>

#include "dialogos/formula.hpp"

namespace dialogos {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  Not,
  And,
  Or,
  Arrow,
  Bottom,
  Turnstile,
  Forall,
  Exists,
  End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    // Multi-character tokens sharing a prefix with identifiers or `|`.
    if (text.compare(i, 3, "_|_") == 0) {
      out.push_back({Tok::Bottom, "_|_", i});
      i += 3;
      continue;
    }
    if (text.compare(i, 2, "|-") == 0) {
      out.push_back({Tok::Turnstile, "|-", i});
      i += 2;
      continue;
    }
    if (text.compare(i, 2, "->") == 0) {
      out.push_back({Tok::Arrow, "->", i});
      i += 2;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      Tok k = Tok::Ident;
      if (word == "forall") k = Tok::Forall;
      else if (word == "exists") k = Tok::Exists;
      else if (word == "false") k = Tok::Bottom;
      out.push_back({k, word, i});
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '~': k = Tok::Not; break;
      case '&': k = Tok::And; break;
      case '|': k = Tok::Or; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({k, std::string(1, c), i});
    ++i;
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, Signature& sig) : toks_(lex(text)), sig_(sig) {}

  Formula formula() { return implication(); }

  Term term() {
    const Token& t = expect(Tok::Ident, "identifier");
    std::string name = t.text;
    if (peek().kind != Tok::LParen) {
      if (is_bound(name) || is_variable_name(name)) return Term::var(name);
      check_arity(sig_.functions, name, 0, t.pos, "function");
      return Term::app(name);
    }
    auto args = arguments();
    check_arity(sig_.functions, name, args.size(), t.pos, "function");
    return Term::app(name, std::move(args));
  }

  bool at(Tok k) const { return peek().kind == k; }
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", found " + got, peek().pos);
    }
    return advance();
  }

 private:
  Formula quantifier() {
    bool universal = advance().kind == Tok::Forall;
    std::string var = expect(Tok::Ident, "bound variable").text;
    expect(Tok::Dot, "'.'");
    bound_.push_back(var);
    Formula body = negation();
    bound_.pop_back();
    return universal ? Formula::forall(var, body) : Formula::exists(var, body);
  }

  Formula implication() {
    Formula l = disjunction();
    if (!at(Tok::Arrow)) return l;
    advance();
    return Formula::implies(l, implication());
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (at(Tok::Or)) {
      advance();
      l = Formula::disj(l, conjunction());
    }
    return l;
  }

  Formula conjunction() {
    Formula l = negation();
    while (at(Tok::And)) {
      advance();
      l = Formula::conj(l, negation());
    }
    return l;
  }

  Formula negation() {
    if (at(Tok::Not)) {
      advance();
      return Formula::negation(negation());
    }
    // Quantifiers are prefix operators binding as tightly as negation.
    if (at(Tok::Forall) || at(Tok::Exists)) return quantifier();
    return atomic();
  }

  Formula atomic() {
    if (at(Tok::LParen)) {
      advance();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Bottom)) {
      advance();
      return Formula::bottom();
    }
    const Token& t = expect(Tok::Ident, "formula");
    std::string name = t.text;
    std::vector<Term> args;
    if (at(Tok::LParen)) args = arguments();
    check_arity(sig_.predicates, name, args.size(), t.pos, "predicate");
    return Formula::atom(name, std::move(args));
  }

  std::vector<Term> arguments() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    args.push_back(term());
    while (at(Tok::Comma)) {
      advance();
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  bool is_bound(const std::string& name) const {
    for (const auto& b : bound_)
      if (b == name) return true;
    return false;
  }

  static void check_arity(std::map<std::string, std::size_t>& table, const std::string& name,
                          std::size_t arity, std::size_t pos, const char* what) {
    auto [it, inserted] = table.emplace(name, arity);
    if (!inserted && it->second != arity) {
      std::ostringstream msg;
      msg << "arity mismatch for " << what << " '" << name << "': used with " << arity
          << " and " << it->second << " arguments";
      throw ParseError(msg.str(), pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature& sig_;
  std::vector<std::string> bound_;
};

void expect_end(Parser& p) {
  if (!p.at(Tok::End)) throw ParseError("unexpected '" + p.peek().text + "'", p.peek().pos);
}

}  // namespace

bool is_variable_name(const std::string& name) {
  return !name.empty() && name[0] >= 'u' && name[0] <= 'z';
}

Formula parse_formula(const std::string& text, Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  expect_end(p);
  return f;
}

Formula parse_formula(const std::string& text) {
  Signature sig;
  return parse_formula(text, sig);
}

Term parse_term(const std::string& text, Signature& sig) {
  Parser p(text, sig);
  Term t = p.term();
  expect_end(p);
  return t;
}

Term parse_term(const std::string& text) {
  Signature sig;
  return parse_term(text, sig);
}

std::pair<std::vector<Formula>, std::vector<Formula>> parse_sequent_text(const std::string& text) {
  Signature sig;
  Parser p(text, sig);
  std::vector<Formula> left, right;
  auto list = [&](std::vector<Formula>& out) {
    if (p.at(Tok::End) || p.at(Tok::Turnstile)) return;
    out.push_back(p.formula());
    while (p.at(Tok::Comma)) {
      p.advance();
      out.push_back(p.formula());
    }
  };
  list(left);
  if (p.at(Tok::Turnstile)) {
    p.advance();
    list(right);
    expect_end(p);
    return {left, right};
  }
  expect_end(p);
  // No turnstile: the formulas are conclusions.
  return {{}, left};
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_term(const Term& t, std::ostringstream& os) {
  os << t.name();
  if (t.is_var() || t.args().empty()) return;
  os << '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ',';
    render_term(t.args()[i], os);
  }
  os << ')';
}

// Binding strength: 1 implication, 2 disjunction, 3 conjunction, 4 prefix
// operators (negation, quantifiers) and atoms.
void render_formula(const Formula& f, int min_level, std::ostringstream& os) {
  auto wrap = [&](int level, auto&& body) {
    bool paren = level < min_level;
    if (paren) os << '(';
    body();
    if (paren) os << ')';
  };
  switch (f.kind()) {
    case Connective::Bottom:
      os << kBottomName;
      return;
    case Connective::Atom:
      os << f.predicate();
      if (!f.args().empty()) {
        os << '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) os << ',';
          render_term(f.args()[i], os);
        }
        os << ')';
      }
      return;
    case Connective::Implies:
      if (f.is_negation()) {
        os << '~';
        render_formula(f.left(), 4, os);
        return;
      }
      wrap(1, [&] {
        render_formula(f.left(), 2, os);
        os << " -> ";
        render_formula(f.right(), 1, os);
      });
      return;
    case Connective::Or:
      wrap(2, [&] {
        render_formula(f.left(), 2, os);
        os << " | ";
        render_formula(f.right(), 3, os);
      });
      return;
    case Connective::And:
      wrap(3, [&] {
        render_formula(f.left(), 3, os);
        os << " & ";
        render_formula(f.right(), 4, os);
      });
      return;
    case Connective::Forall:
    case Connective::Exists:
      os << (f.kind() == Connective::Forall ? "forall " : "exists ") << f.bound_var() << ". ";
      render_formula(f.body(), 4, os);
      return;
  }
}

}  // namespace

std::string render(const Term& t) {
  std::ostringstream os;
  render_term(t, os);
  return os.str();
}

std::string render(const Formula& f) {
  std::ostringstream os;
  render_formula(f, 1, os);
  return os.str();
}

}  // namespace dialogos
