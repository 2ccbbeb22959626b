#include <charconv>
#include <set>

#include "actorcap/syntax.hpp"
#include "lang_parse.hpp"

namespace actorcap {

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

const std::set<std::string, std::less<>> kKeywords = {
    "let", "in",   "if",    "then",  "else", "split", "as",   "fun",  "beh",
    "spawn", "send", "self", "not",  "true", "false", "msg",  "eps",  "Bool",
    "Nat", "Unit", "ActorRef", "Beh",
};

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(detail::lex(text)) {}

  Program program() {
    Program p;
    alphabet_ = &p.alphabet;
    // Payload types may mention any declared message, so names come first.
    for (std::size_t i = 0; ts_.peek(i).kind != Tok::End; ++i) {
      const Token& name = ts_.peek(i + 1);
      if (ts_.peek(i).kind != Tok::Ident || ts_.peek(i).text != "msg" || name.kind != Tok::Ident)
        continue;
      if (name.text == "Unit" || p.alphabet.find(name.text))
        throw ParseError(name.loc, "message type '" + name.text + "' is already declared");
      if (kKeywords.count(name.text))
        throw ParseError(name.loc, "'" + name.text + "' is a reserved word");
      p.alphabet.intern(name.text);
    }
    p.payloads.resize(p.alphabet.size());
    p.payloads[Alphabet::unit.id] = Type::unit();
    while (ts_.accept_keyword("msg")) {
      Token name = ts_.expect(Tok::Ident);
      ts_.expect(Tok::Colon);
      MsgType m = *p.alphabet.find(name.text);
      p.payloads[m.id] = type();
      p.decls.push_back({name.text, m, p.payloads[m.id], name.loc});
    }
    p.root = expr();
    if (!ts_.at(Tok::End))
      ts_.fail({"end of input"});
    p.node_count = next_id_;
    return p;
  }

 private:
  // ---- helpers -------------------------------------------------------------

  MsgType resolve_msg(const Token& name) {
    if (auto m = alphabet_->find(name.text))
      return *m;
    throw ParseError(name.loc, "undeclared message type '" + name.text + "'");
  }

  LangExpr lang() {
    return detail::parse_lang_expr(ts_, [this](const Token& t) { return resolve_msg(t); });
  }

  LangExpr bracketed_lang() {
    ts_.expect(Tok::LBracket);
    LangExpr l = lang();
    ts_.expect(Tok::RBracket);
    return l;
  }

  std::string binder() {
    Token t = ts_.expect(Tok::Ident);
    if (kKeywords.count(t.text))
      throw ParseError(t.loc, "'" + t.text + "' is a reserved word", {"identifier"});
    return t.text;
  }

  MsgType msg_name() {
    Token t = ts_.expect(Tok::Ident);
    return resolve_msg(t);
  }

  ExprPtr make(SourceLoc loc, ExprNode node) {
    return std::make_shared<const Expr>(Expr{next_id_++, loc, std::move(node)});
  }

  // ---- types ---------------------------------------------------------------

  TypePtr type() {
    TypePtr lhs = prod_type();
    if (ts_.accept(Tok::ArrowOpen)) {
      LangExpr latent = lang();
      ts_.expect(Tok::ArrowClose);
      return Type::fun(lhs, latent, type());
    }
    return lhs;
  }

  TypePtr prod_type() {
    TypePtr lhs = atom_type();
    if (ts_.accept(Tok::Star))
      return Type::prod(lhs, prod_type());
    return lhs;
  }

  TypePtr atom_type() {
    if (ts_.accept_keyword("Bool"))
      return Type::boolean();
    if (ts_.accept_keyword("Nat"))
      return Type::nat();
    if (ts_.accept_keyword("Unit"))
      return Type::unit();
    if (ts_.accept_keyword("ActorRef"))
      return Type::actor_ref(bracketed_lang());
    if (ts_.accept_keyword("Beh"))
      return Type::beh(bracketed_lang());
    if (ts_.accept(Tok::LParen)) {
      TypePtr t = type();
      ts_.expect(Tok::RParen);
      return t;
    }
    ts_.fail({"'Bool'", "'Nat'", "'Unit'", "'ActorRef'", "'Beh'", "'('"});
  }

  // ---- expressions ---------------------------------------------------------

  ExprPtr expr() {
    SourceLoc loc = ts_.peek().loc;
    if (ts_.accept_keyword("let")) {
      std::string name = binder();
      ts_.expect(Tok::Eq);
      ExprPtr bound = expr();
      ts_.expect_keyword("in");
      return make(loc, Let{name, bound, expr()});
    }
    if (ts_.accept_keyword("if")) {
      ExprPtr c = expr();
      ts_.expect_keyword("then");
      ExprPtr t = expr();
      ts_.expect_keyword("else");
      return make(loc, If{c, t, expr()});
    }
    if (ts_.accept_keyword("split")) {
      Path src = path();
      ts_.expect_keyword("as");
      SplitBinding a = split_binding();
      ts_.expect(Tok::Comma);
      SplitBinding b = split_binding();
      if (a.name == b.name)
        throw ParseError(loc, "split introduces '" + a.name + "' twice");
      ts_.expect_keyword("in");
      return make(loc, Split{src, a, b, expr()});
    }
    if (ts_.accept_keyword("fun")) {
      Fun f;
      f.name = binder();
      ts_.expect(Tok::LParen);
      f.param = binder();
      ts_.expect(Tok::Colon);
      f.param_type = type();
      ts_.expect(Tok::RParen);
      ts_.expect(Tok::Colon);
      f.ret_type = type();
      f.latent = ts_.accept(Tok::Bang) ? lang() : eps();
      ts_.expect(Tok::FatArrow);
      f.body = expr();
      return make(loc, std::move(f));
    }
    return or_expr();
  }

  SplitBinding split_binding() {
    std::string name = binder();
    ts_.expect(Tok::Colon);
    return {name, type()};
  }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (ts_.at(Tok::OrOr)) {
      SourceLoc loc = ts_.next().loc;
      lhs = make(loc, BinOp{BinOpKind::Or, lhs, and_expr()});
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = cmp_expr();
    while (ts_.at(Tok::AndAnd)) {
      SourceLoc loc = ts_.next().loc;
      lhs = make(loc, BinOp{BinOpKind::And, lhs, cmp_expr()});
    }
    return lhs;
  }

  ExprPtr cmp_expr() {
    ExprPtr lhs = add_expr();
    if (ts_.at(Tok::EqEq) || ts_.at(Tok::Lt)) {
      Token op = ts_.next();
      auto kind = op.kind == Tok::EqEq ? BinOpKind::Eq : BinOpKind::Lt;
      return make(op.loc, BinOp{kind, lhs, add_expr()});
    }
    return lhs;
  }

  ExprPtr add_expr() {
    ExprPtr lhs = mul_expr();
    while (ts_.at(Tok::Plus) || ts_.at(Tok::Minus)) {
      Token op = ts_.next();
      auto kind = op.kind == Tok::Plus ? BinOpKind::Add : BinOpKind::Sub;
      lhs = make(op.loc, BinOp{kind, lhs, mul_expr()});
    }
    return lhs;
  }

  ExprPtr mul_expr() {
    ExprPtr lhs = unary();
    while (ts_.at(Tok::Star) || ts_.at(Tok::Slash)) {
      Token op = ts_.next();
      auto kind = op.kind == Tok::Star ? BinOpKind::Mul : BinOpKind::Div;
      lhs = make(op.loc, BinOp{kind, lhs, unary()});
    }
    return lhs;
  }

  ExprPtr unary() {
    SourceLoc loc = ts_.peek().loc;
    if (ts_.accept_keyword("not"))
      return make(loc, Not{unary()});
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    while (ts_.at(Tok::LParen)) {
      SourceLoc loc = ts_.next().loc;
      ExprPtr arg = expr();
      ts_.expect(Tok::RParen);
      e = make(loc, App{e, arg});
    }
    return e;
  }

  Path path() {
    Token base = ts_.expect(Tok::Ident);
    if (kKeywords.count(base.text))
      throw ParseError(base.loc, "'" + base.text + "' is a reserved word", {"identifier"});
    Path p{base.text, {}, base.loc};
    while (ts_.at(Tok::Dot) && ts_.peek(1).kind == Tok::Number) {
      ts_.next();
      Token sel = ts_.next();
      if (sel.text != "1" && sel.text != "2")
        throw ParseError(sel.loc, "path selector must be 1 or 2");
      p.selectors.push_back(sel.text == "1" ? 1 : 2);
    }
    return p;
  }

  ExprPtr atom() {
    const Token& t = ts_.peek();
    SourceLoc loc = t.loc;
    if (t.kind == Tok::Number) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{})
        throw ParseError(loc, "number literal out of range");
      ts_.next();
      return make(loc, NatLit{v});
    }
    if (ts_.accept(Tok::LParen)) {
      if (ts_.accept(Tok::RParen))
        return make(loc, UnitLit{});
      ExprPtr first = expr();
      if (ts_.accept(Tok::Comma)) {
        ExprPtr second = expr();
        ts_.expect(Tok::RParen);
        return make(loc, Pair{first, second});
      }
      ts_.expect(Tok::RParen);
      return first;
    }
    if (t.kind != Tok::Ident)
      ts_.fail({"expression"});
    if (ts_.accept_keyword("true"))
      return make(loc, BoolLit{true});
    if (ts_.accept_keyword("false"))
      return make(loc, BoolLit{false});
    if (ts_.accept_keyword("self"))
      return make(loc, SelfCap{bracketed_lang()});
    if (ts_.accept_keyword("beh"))
      return behaviour(loc);
    if (ts_.accept_keyword("spawn")) {
      std::optional<LangExpr> cap;
      if (ts_.at(Tok::LBracket))
        cap = bracketed_lang();
      ts_.expect(Tok::LParen);
      ExprPtr b = expr();
      ts_.expect(Tok::RParen);
      return make(loc, Spawn{cap, b});
    }
    if (ts_.accept_keyword("send")) {
      ts_.expect(Tok::LBracket);
      MsgType m = msg_name();
      ts_.expect(Tok::RBracket);
      ts_.expect(Tok::LParen);
      Path target = path();
      ts_.expect(Tok::Comma);
      ExprPtr payload = expr();
      ts_.expect(Tok::RParen);
      return make(loc, Send{m, target, payload});
    }
    if (t.text == "let" || t.text == "if" || t.text == "split" || t.text == "fun")
      return expr();
    return make(loc, Var{path()});
  }

  ExprPtr behaviour(SourceLoc loc) {
    Beh b{bracketed_lang(), {}};
    ts_.expect(Tok::LBrace);
    while (!ts_.at(Tok::RBrace)) {
      Case c;
      c.loc = ts_.peek().loc;
      c.msg = msg_name();
      ts_.expect(Tok::LParen);
      c.binder = binder();
      ts_.expect(Tok::RParen);
      ts_.expect(Tok::FatArrow);
      c.body = expr();
      b.cases.push_back(std::move(c));
      if (!ts_.accept(Tok::Semi))
        break;
    }
    ts_.expect(Tok::RBrace);
    return make(loc, std::move(b));
  }

  TokenStream ts_;
  Alphabet* alphabet_ = nullptr;
  NodeId next_id_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  return Parser(text).program();
}

}  // namespace actorcap
