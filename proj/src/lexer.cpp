#include "lexer.hpp"

#include <cctype>

namespace actorcap {

std::string to_string(SourceLoc loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

namespace {

std::string render_parse_error(SourceLoc loc, const std::string& message,
                               const std::vector<std::string>& expected) {
  std::string out = to_string(loc) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0)
        out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

ParseError::ParseError(SourceLoc loc, std::string message, std::vector<std::string> expected)
    : std::runtime_error(render_parse_error(loc, message, expected)),
      loc_(loc),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

}  // namespace actorcap

namespace actorcap::detail {

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Pipe: return "'|'";
    case Tok::Hash: return "'#'";
    case Tok::Amp: return "'&'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Slash: return "'/'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Bang: return "'!'";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::FatArrow: return "'=>'";
    case Tok::OrOr: return "'||'";
    case Tok::AndAnd: return "'&&'";
    case Tok::ArrowOpen: return "'-['";
    case Tok::ArrowClose: return "']->'";
    case Tok::End: return "end of input";
  }
  return "token";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (starts("--")) {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    struct Multi {
      std::string_view text;
      Tok kind;
    };
    static constexpr Multi multi[] = {
        {"]->", Tok::ArrowClose}, {"-[", Tok::ArrowOpen}, {"=>", Tok::FatArrow},
        {"==", Tok::EqEq},        {"||", Tok::OrOr},      {"&&", Tok::AndAnd},
    };
    bool matched = false;
    for (const auto& m : multi) {
      if (starts(m.text)) {
        out.push_back({m.kind, std::string(m.text), loc});
        advance(m.text.size());
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case ',': kind = Tok::Comma; break;
      case ':': kind = Tok::Colon; break;
      case ';': kind = Tok::Semi; break;
      case '.': kind = Tok::Dot; break;
      case '|': kind = Tok::Pipe; break;
      case '#': kind = Tok::Hash; break;
      case '&': kind = Tok::Amp; break;
      case '*': kind = Tok::Star; break;
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '/': kind = Tok::Slash; break;
      case '<': kind = Tok::Lt; break;
      case '>': kind = Tok::Gt; break;
      case '!': kind = Tok::Bang; break;
      case '=': kind = Tok::Eq; break;
      default:
        throw ParseError(loc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), loc});
    advance(1);
  }
  out.push_back({Tok::End, "", SourceLoc{line, col}});
  return out;
}

Token TokenStream::expect(Tok t) {
  if (!at(t))
    fail({describe(t)});
  return next();
}

void TokenStream::expect_keyword(std::string_view kw) {
  if (!at_keyword(kw))
    fail({"'" + std::string(kw) + "'"});
  next();
}

void TokenStream::fail(std::vector<std::string> expected) const {
  const Token& t = peek();
  std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(t.loc, "unexpected " + found, std::move(expected));
}

}  // namespace actorcap::detail
