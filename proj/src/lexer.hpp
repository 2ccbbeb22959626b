#pragma once

// Shared tokenizer for `.acap` programs and standalone language expressions.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "actorcap/source.hpp"

namespace actorcap::detail {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Semi,
  Dot,
  Pipe,
  Hash,
  Amp,
  Star,
  Plus,
  Minus,
  Slash,
  Lt,
  Gt,
  Bang,
  Eq,
  EqEq,
  FatArrow,
  OrOr,
  AndAnd,
  ArrowOpen,   // -[
  ArrowClose,  // ]->
  End,
};

std::string describe(Tok t);

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

std::vector<Token> lex(std::string_view src);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  bool accept(Tok t) {
    if (!at(t))
      return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw))
      return false;
    next();
    return true;
  }
  Token expect(Tok t);
  void expect_keyword(std::string_view kw);
  [[noreturn]] void fail(std::vector<std::string> expected) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace actorcap::detail
