#include "eldec/parse.hpp"

#include <cctype>
#include <charconv>

namespace eldec {

namespace {

struct Token {
  enum class Kind {
    Ident, Nat, Hash, LParen, RParen, Comma, Dot, Eq, Lt,
    Tilde, Amp, Bar, Arrow, End
  };
  Kind kind;
  std::string text;
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormulaError(msg + " at position " + std::to_string(tok_.pos));
  }

private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
    tok_.pos = i_;
    if (i_ >= s_.size()) {
      tok_ = {Token::Kind::End, "", i_};
      return;
    }
    char c = s_[i_];
    auto one = [&](Token::Kind k) {
      tok_ = {k, std::string(1, c), i_};
      ++i_;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      tok_ = {Token::Kind::Ident, std::string(s_.substr(i_, j - i_)), i_};
      i_ = j;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
        ++j;
      tok_ = {Token::Kind::Nat, std::string(s_.substr(i_, j - i_)), i_};
      i_ = j;
      return;
    }
    switch (c) {
      case '#': one(Token::Kind::Hash); return;
      case '(': one(Token::Kind::LParen); return;
      case ')': one(Token::Kind::RParen); return;
      case ',': one(Token::Kind::Comma); return;
      case '.': one(Token::Kind::Dot); return;
      case '=': one(Token::Kind::Eq); return;
      case '<': one(Token::Kind::Lt); return;
      case '~': one(Token::Kind::Tilde); return;
      case '&': one(Token::Kind::Amp); return;
      case '|': one(Token::Kind::Bar); return;
      case '-':
        if (i_ + 1 < s_.size() && s_[i_ + 1] == '>') {
          tok_ = {Token::Kind::Arrow, "->", i_};
          i_ += 2;
          return;
        }
        break;
    }
    throw FormulaError("unexpected character '" + std::string(1, c) +
                       "' at position " + std::to_string(i_));
  }

  std::string_view s_;
  size_t i_ = 0;
  Token tok_{Token::Kind::End, "", 0};
};

class Parser {
public:
  Parser(const Signature& sig, std::string_view text) : sig_(sig), lex_(text) {}

  FormulaPtr formula() {
    FormulaPtr f = implies();
    expect_end();
    return f;
  }

  Term term_only() {
    Term t = term();
    expect_end();
    return t;
  }

private:
  void expect_end() {
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input");
  }

  void expect(Token::Kind k, const char* what) {
    if (lex_.peek().kind != k) lex_.fail(std::string("expected ") + what);
    lex_.take();
  }

  FormulaPtr implies() {
    FormulaPtr l = disj();
    if (lex_.peek().kind == Token::Kind::Arrow) {
      lex_.take();
      return mk_implies(l, implies());
    }
    return l;
  }

  FormulaPtr disj() {
    FormulaPtr l = conj();
    while (lex_.peek().kind == Token::Kind::Bar) {
      lex_.take();
      l = mk_or(l, conj());
    }
    return l;
  }

  FormulaPtr conj() {
    FormulaPtr l = unary();
    while (lex_.peek().kind == Token::Kind::Amp) {
      lex_.take();
      l = mk_and(l, unary());
    }
    return l;
  }

  FormulaPtr quantifier(bool universal) {
    lex_.take();
    if (lex_.peek().kind != Token::Kind::Ident)
      lex_.fail("expected variable after quantifier");
    std::string v = lex_.take().text;
    expect(Token::Kind::Dot, "'.'");
    FormulaPtr body = implies();
    return universal ? mk_forall(v, body) : mk_exists(v, body);
  }

  FormulaPtr unary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Tilde) {
      lex_.take();
      return mk_not(unary());
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "forall") return quantifier(true);
      if (t.text == "exists") return quantifier(false);
      if (t.text == "true") {
        lex_.take();
        return mk_true();
      }
      if (t.text == "false") {
        lex_.take();
        return mk_false();
      }
    }
    if (t.kind == Token::Kind::LParen) {
      // Terms never start with '(' so this is always a subformula.
      lex_.take();
      FormulaPtr f = implies();
      expect(Token::Kind::RParen, "')'");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    Term lhs = term();
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Eq) {
      lex_.take();
      return mk_eq(lhs, term());
    }
    if (t.kind == Token::Kind::Lt) {
      lex_.take();
      return mk_atom("<", {lhs, term()});
    }
    // Not followed by = or <: must itself be a relational atom.
    if (lhs.kind == Term::Kind::App) {
      auto ri = sig_.relation_index(lhs.name);
      if (ri && sig_.relations()[*ri].arity == lhs.args.size())
        return mk_atom(lhs.name, std::move(lhs.args));
      auto fi = sig_.function_index(lhs.name);
      if (fi)
        lex_.fail("term of function '" + lhs.name +
                  "' cannot stand alone as a formula");
      lex_.fail("unknown relation '" + lhs.name + "' with " +
                std::to_string(lhs.args.size()) + " argument(s)");
    }
    lex_.fail("expected an atom");
  }

  Term term() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Hash) {
      lex_.take();
      if (lex_.peek().kind != Token::Kind::Nat)
        lex_.fail("expected number after '#'");
      Token n = lex_.take();
      uint64_t v = 0;
      auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
      if (ec != std::errc() || p != n.text.data() + n.text.size())
        lex_.fail("bad domain constant");
      return Term::dom_const(v);
    }
    if (t.kind != Token::Kind::Ident) lex_.fail("expected a term");
    Token name = lex_.take();
    if (lex_.peek().kind == Token::Kind::LParen) {
      lex_.take();
      std::vector<Term> args;
      args.push_back(term());
      while (lex_.peek().kind == Token::Kind::Comma) {
        lex_.take();
        args.push_back(term());
      }
      expect(Token::Kind::RParen, "')'");
      return Term::app(name.text, std::move(args));
    }
    auto fi = sig_.function_index(name.text);
    if (fi && sig_.functions()[*fi].arity == 0)
      return Term::named_const(name.text);
    return Term::var(name.text);
  }

  const Signature& sig_;
  Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(const Signature& sig, std::string_view text) {
  return Parser(sig, text).formula();
}

Term parse_term(const Signature& sig, std::string_view text) {
  return Parser(sig, text).term_only();
}

}  // namespace eldec
