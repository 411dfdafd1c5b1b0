#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "homchar/errors.hpp"

namespace homchar::detail {

enum class Tok {
  Ident,
  Number,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Equals,
  Comma,
  Colon,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::string describe(const Token& t) {
  return t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
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
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    std::size_t l = line, cl = col;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '=': k = Tok::Equals; break;
      case ',': k = Tok::Comma; break;
      case ':': k = Tok::Colon; break;
      default:
        throw ParseError("unexpected character '" + std::string(1, static_cast<char>(c)) + "'", l, cl);
    }
    out.push_back({k, std::string(1, static_cast<char>(c)), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

/// Cursor over a token vector with expect/accept helpers.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + ", found " + describe(peek()));
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("syntax error: " + msg, peek().line, peek().column);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline unsigned parse_nat(const Token& t) {
  if (t.text.size() > 9) throw ParseError("integer too large: " + t.text, t.line, t.column);
  return static_cast<unsigned>(std::stoul(t.text));
}

}  // namespace homchar::detail
