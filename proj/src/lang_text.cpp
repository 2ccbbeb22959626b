#include "actorcap/lang_text.hpp"

#include "lang_parse.hpp"

namespace actorcap {

namespace detail {

namespace {

LangExpr parse_alt(TokenStream& ts, const SymbolResolver& resolve);

LangExpr parse_atom(TokenStream& ts, const SymbolResolver& resolve) {
  if (ts.at(Tok::Number)) {
    if (ts.peek().text != "0")
      throw ParseError(ts.peek().loc, "only 0 is a language literal", {"'0'"});
    ts.next();
    return empty_lang();
  }
  if (ts.accept_keyword("eps"))
    return eps();
  if (ts.accept(Tok::Lt)) {
    Token name = ts.expect(Tok::Ident);
    ts.expect(Tok::Gt);
    return sym(resolve(name));
  }
  if (ts.accept(Tok::LParen)) {
    LangExpr inner = parse_alt(ts, resolve);
    ts.expect(Tok::RParen);
    return inner;
  }
  ts.fail({"'0'", "'eps'", "'<'", "'('"});
}

LangExpr parse_postfix(TokenStream& ts, const SymbolResolver& resolve) {
  LangExpr l = parse_atom(ts, resolve);
  while (ts.accept(Tok::Star))
    l = raw::star(std::move(l));
  return l;
}

LangExpr parse_cat(TokenStream& ts, const SymbolResolver& resolve) {
  LangExpr l = parse_postfix(ts, resolve);
  if (ts.accept(Tok::Dot))
    return raw::cat(std::move(l), parse_cat(ts, resolve));
  return l;
}

LangExpr parse_shuffle(TokenStream& ts, const SymbolResolver& resolve) {
  LangExpr l = parse_cat(ts, resolve);
  if (ts.accept(Tok::Hash))
    return raw::shuffle(std::move(l), parse_shuffle(ts, resolve));
  return l;
}

LangExpr parse_and(TokenStream& ts, const SymbolResolver& resolve) {
  LangExpr l = parse_shuffle(ts, resolve);
  if (ts.accept(Tok::Amp))
    return raw::intersect(std::move(l), parse_and(ts, resolve));
  return l;
}

LangExpr parse_alt(TokenStream& ts, const SymbolResolver& resolve) {
  LangExpr l = parse_and(ts, resolve);
  if (ts.accept(Tok::Pipe))
    return raw::alt(std::move(l), parse_alt(ts, resolve));
  return l;
}

}  // namespace

LangExpr parse_lang_expr(TokenStream& ts, const SymbolResolver& resolve) {
  return parse_alt(ts, resolve);
}

}  // namespace detail

LangExpr parse_lang(std::string_view text, Alphabet& alphabet, SymbolPolicy policy) {
  detail::TokenStream ts(detail::lex(text));
  auto resolve = [&](const detail::Token& name) {
    if (policy == SymbolPolicy::Intern)
      return alphabet.intern(name.text);
    if (auto m = alphabet.find(name.text))
      return *m;
    throw ParseError(name.loc, "undeclared message type '" + name.text + "'");
  };
  LangExpr l = detail::parse_lang_expr(ts, resolve);
  if (!ts.at(detail::Tok::End))
    ts.fail({"end of input"});
  return l;
}

namespace {

int precedence(LangKind k) {
  switch (k) {
    case LangKind::Alt: return 1;
    case LangKind::And: return 2;
    case LangKind::Shuffle: return 3;
    case LangKind::Cat: return 4;
    case LangKind::Star: return 5;
    default: return 6;
  }
}

const char* infix(LangKind k) {
  switch (k) {
    case LangKind::Alt: return " | ";
    case LangKind::And: return " & ";
    case LangKind::Shuffle: return " # ";
    case LangKind::Cat: return ".";
    default: return "";
  }
}

void print(const LangExpr& l, const Alphabet& alphabet, int context, std::string& out) {
  int prec = precedence(l.kind());
  bool parens = prec < context;
  if (parens)
    out += '(';
  auto kids = l.children();
  switch (l.kind()) {
    case LangKind::Empty:
      out += '0';
      break;
    case LangKind::Eps:
      out += "eps";
      break;
    case LangKind::Sym:
      out += '<';
      out += alphabet.name(l.symbol());
      out += '>';
      break;
    case LangKind::Star:
      print(kids[0], alphabet, 6, out);
      out += '*';
      break;
    default:
      // right-associative: every operand but the last binds tighter
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0)
          out += infix(l.kind());
        print(kids[i], alphabet, i + 1 == kids.size() ? prec : prec + 1, out);
      }
      break;
  }
  if (parens)
    out += ')';
}

}  // namespace

std::string to_string(const LangExpr& l, const Alphabet& alphabet) {
  std::string out;
  print(l, alphabet, 0, out);
  return out;
}

std::string word_to_string(const Word& w, const Alphabet& alphabet) {
  if (w.empty())
    return "eps";
  bool single_chars = true;
  for (MsgType m : w)
    single_chars = single_chars && alphabet.name(m).size() == 1;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && !single_chars)
      out += '.';
    out += alphabet.name(w[i]);
  }
  return out;
}

}  // namespace actorcap
