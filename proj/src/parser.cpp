#include "grothlin/parser.hpp"

#include <cctype>

#include "grothlin/error.hpp"

namespace grothlin {

namespace {

enum class Tok {
  End, Ident, Number, LParen, RParen, Dot, Amp, Pipe, Bang,
  Plus, Minus, Star, Lt, Le, Eq, Ne, Gt, Ge,
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  Tok tok = Tok::End;
  std::size_t tok_pos = 0;
  std::string text;  // Ident / Number lexeme

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_pos); }

  void advance() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    tok_pos = pos;
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    char c = src[pos];
    auto two = [&](char second) { return pos + 1 < src.size() && src[pos + 1] == second; };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos < src.size() && src[pos] == '/') {
        std::size_t save = pos;
        ++pos;
        if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        } else {
          pos = save;  // lone '/', not a fraction
        }
      }
      text = std::string(src.substr(start, pos - start));
      tok = Tok::Number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      text = std::string(src.substr(start, pos - start));
      tok = Tok::Ident;
      return;
    }
    switch (c) {
      case '(': tok = Tok::LParen; ++pos; return;
      case ')': tok = Tok::RParen; ++pos; return;
      case '.': tok = Tok::Dot; ++pos; return;
      case '&': tok = Tok::Amp; ++pos; return;
      case '|': tok = Tok::Pipe; ++pos; return;
      case '+': tok = Tok::Plus; ++pos; return;
      case '-': tok = Tok::Minus; ++pos; return;
      case '*': tok = Tok::Star; ++pos; return;
      case '!':
        if (two('=')) { tok = Tok::Ne; pos += 2; } else { tok = Tok::Bang; ++pos; }
        return;
      case '<':
        if (two('=')) { tok = Tok::Le; pos += 2; } else { tok = Tok::Lt; ++pos; }
        return;
      case '>':
        if (two('=')) { tok = Tok::Ge; pos += 2; } else { tok = Tok::Gt; ++pos; }
        return;
      case '=': tok = Tok::Eq; ++pos; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
};

struct Parser {
  Lexer lex;
  std::vector<std::string> scope;  // free names, then active binders

  Parser(std::string_view text, const std::vector<std::string>& names)
      : lex(text), scope(names) {}

  void expect(Tok t, const char* what) {
    if (lex.tok != t) lex.fail(std::string("expected ") + what);
    lex.advance();
  }

  int lookup(const std::string& name, std::size_t at) const {
    for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i)
      if (scope[i] == name) return i;
    throw SemanticError("unknown identifier '" + name + "' (at offset " +
                        std::to_string(at) + ")");
  }

  int cap() const { return static_cast<int>(scope.size()); }

  Rational number() {
    Rational r;
    try {
      r = Rational::parse(lex.text);
    } catch (const Error& e) {
      lex.fail(e.what());
    }
    lex.advance();
    return r;
  }

  // term := rational | ident | term '+' term | term '-' term
  //       | rational '*' ident | '-' term
  LinTerm term_atom() {
    if (lex.tok == Tok::Minus) {
      lex.advance();
      return -term_atom();
    }
    if (lex.tok == Tok::Number) {
      Rational r = number();
      if (lex.tok == Tok::Star) {
        lex.advance();
        if (lex.tok != Tok::Ident) lex.fail("expected a variable after '*'");
        int v = lookup(lex.text, lex.tok_pos);
        lex.advance();
        return LinTerm::variable(cap(), v, r);
      }
      return LinTerm::constant(cap(), r);
    }
    if (lex.tok == Tok::Ident) {
      if (lex.text == "EX" || lex.text == "ALL") lex.fail("quantifier in term position");
      int v = lookup(lex.text, lex.tok_pos);
      lex.advance();
      return LinTerm::variable(cap(), v);
    }
    lex.fail("expected a term");
  }

  LinTerm term() {
    LinTerm t = term_atom();
    while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
      bool plus = lex.tok == Tok::Plus;
      lex.advance();
      LinTerm rhs = term_atom();
      t = plus ? t + rhs : t - rhs;
    }
    return t;
  }

  Formula atom() {
    LinTerm lhs = term();
    Tok rel = lex.tok;
    switch (rel) {
      case Tok::Lt: case Tok::Le: case Tok::Eq:
      case Tok::Ne: case Tok::Gt: case Tok::Ge:
        break;
      default:
        lex.fail("expected a relation");
    }
    lex.advance();
    LinTerm rhs = term();
    LinTerm d = lhs - rhs;  // lhs REL rhs  ==  d REL 0
    switch (rel) {
      case Tok::Lt: return Formula::atom(d, Rel::LT);
      case Tok::Eq: return Formula::atom(d, Rel::EQ);
      case Tok::Gt: return Formula::atom(-d, Rel::LT);
      case Tok::Le:
        return Formula::disj({Formula::atom(d, Rel::LT), Formula::atom(d, Rel::EQ)});
      case Tok::Ge:
        return Formula::disj({Formula::atom(-d, Rel::LT), Formula::atom(d, Rel::EQ)});
      case Tok::Ne:
        return Formula::disj({Formula::atom(d, Rel::LT), Formula::atom(-d, Rel::LT)});
      default:
        lex.fail("expected a relation");
    }
  }

  Formula unary() {
    if (lex.tok == Tok::Bang) {
      lex.advance();
      return Formula::negation(unary());
    }
    if (lex.tok == Tok::LParen) {
      lex.advance();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (lex.tok == Tok::Amp) {
      lex.advance();
      parts.push_back(unary());
    }
    return Formula::conj(std::move(parts));
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (lex.tok == Tok::Pipe) {
      lex.advance();
      parts.push_back(conjunction());
    }
    return Formula::disj(std::move(parts));
  }

  Formula formula() {
    if (lex.tok == Tok::Ident && (lex.text == "EX" || lex.text == "ALL")) {
      bool universal = lex.text == "ALL";
      lex.advance();
      if (lex.tok != Tok::Ident) lex.fail("expected a variable after the quantifier");
      if (lex.text == "EX" || lex.text == "ALL") lex.fail("'EX'/'ALL' cannot name a variable");
      std::string name = lex.text;
      lex.advance();
      expect(Tok::Dot, "'.'");
      int index = cap();
      scope.push_back(name);
      Formula body = formula();  // scope extends maximally right
      scope.pop_back();
      if (universal)
        return Formula::negation(Formula::exists(index, Formula::negation(std::move(body))));
      return Formula::exists(index, std::move(body));
    }
    return disjunction();
  }
};

}  // namespace

Formula parse_formula(std::string_view text, const std::vector<std::string>& names) {
  Parser p(text, names);
  Formula f = p.formula();
  if (p.lex.tok != Tok::End) p.lex.fail("trailing input after the formula");
  return f;
}

LinTerm parse_term(std::string_view text, const std::vector<std::string>& names) {
  Parser p(text, names);
  LinTerm t = p.term();
  if (p.lex.tok != Tok::End) p.lex.fail("trailing input after the term");
  return t;
}

}  // namespace grothlin
