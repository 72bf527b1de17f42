#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "effad/errors.hpp"
#include "effad/expr.hpp"
#include "effad/value.hpp"

namespace effad::expr {

namespace {

enum class Tok { Number, Ident, Let, In, Checkpoint, Plus, Minus, Star,
                 Equals, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    Token tok{Tok::End, std::string(1, ch), 0, line, col};
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j + 1 < src.size() && src[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      tok.kind = Tok::Number;
      tok.text = std::string(src.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(tok.text.data(),
                                       tok.text.data() + tok.text.size(),
                                       tok.number);
      if (ec != std::errc()) {
        throw ParseError("malformed number '" + tok.text + "'", line, col);
      }
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      tok.text = std::string(src.substr(i, j - i));
      if (tok.text == "let") {
        tok.kind = Tok::Let;
      } else if (tok.text == "in") {
        tok.kind = Tok::In;
      } else if (tok.text == "checkpoint") {
        tok.kind = Tok::Checkpoint;
      } else {
        tok.kind = Tok::Ident;
      }
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    switch (ch) {
      case '+': tok.kind = Tok::Plus; break;
      case '-': tok.kind = Tok::Minus; break;
      case '*': tok.kind = Tok::Star; break;
      case '=': tok.kind = Tok::Equals; break;
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      default:
        throw ParseError("unexpected character '" + std::string(1, ch) + "'",
                         line, col);
    }
    out.push_back(tok);
    advance(1);
  }
  out.push_back(Token{Tok::End, "", 0, line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  AstPtr parse_all() {
    AstPtr e = expr();
    if (peek().kind != Tok::End) fail("expected an operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(what + ", found " + describe(t), t.line, t.column);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }

  AstPtr expr() {
    AstPtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool plus = next().kind == Tok::Plus;
      AstPtr rhs = term();
      lhs = plus ? add(lhs, rhs) : sub(lhs, rhs);
    }
    return lhs;
  }

  AstPtr term() {
    AstPtr lhs = factor();
    while (peek().kind == Tok::Star) {
      ++pos_;
      lhs = mul(lhs, factor());
    }
    return lhs;
  }

  AstPtr factor() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Minus:
        ++pos_;
        return neg(factor());
      case Tok::Number:
        ++pos_;
        return num(tok.number);
      case Tok::Ident:
        ++pos_;
        return var(tok.text);
      case Tok::LParen: {
        ++pos_;
        AstPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Let: {
        ++pos_;
        if (peek().kind != Tok::Ident) fail("expected a variable name");
        std::string name = next().text;
        expect(Tok::Equals, "'='");
        AstPtr bound = expr();
        expect(Tok::In, "'in'");
        return let(std::move(name), bound, expr());
      }
      case Tok::Checkpoint: {
        ++pos_;
        expect(Tok::LParen, "'(' after checkpoint");
        AstPtr body = expr();
        expect(Tok::RParen, "')'");
        return checkpoint(body);
      }
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Precedence levels: 1 additive, 2 multiplicative, 3 prefix and atoms.
std::string print_at(const Ast& a, int ctx) {
  auto wrap = [ctx](int level, std::string s) {
    return level < ctx ? "(" + s + ")" : s;
  };
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Num>) {
          if (n.value < 0) return "(" + format_real(n.value) + ")";
          return format_real(n.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Neg>) {
          // `-3` reads back as neg(3), so a literal argument stays bare.
          return wrap(3, "-" + print_at(*n.arg, 3));
        } else if constexpr (std::is_same_v<T, Add>) {
          return wrap(1, print_at(*n.lhs, 1) + " + " + print_at(*n.rhs, 2));
        } else if constexpr (std::is_same_v<T, Sub>) {
          return wrap(1, print_at(*n.lhs, 1) + " - " + print_at(*n.rhs, 2));
        } else if constexpr (std::is_same_v<T, Mul>) {
          return wrap(2, print_at(*n.lhs, 2) + " * " + print_at(*n.rhs, 3));
        } else if constexpr (std::is_same_v<T, Let>) {
          // A let body extends as far right as possible.
          std::string s = "let " + n.name + " = " + print_at(*n.bound, 0) +
                          " in " + print_at(*n.body, 0);
          return ctx > 0 ? "(" + s + ")" : s;
        } else {
          return "checkpoint(" + print_at(*n.body, 0) + ")";
        }
      },
      a.node);
}

}  // namespace

AstPtr parse(std::string_view text) { return Parser(lex(text)).parse_all(); }

std::string print(const Ast& a) { return print_at(a, 0); }

}  // namespace effad::expr
