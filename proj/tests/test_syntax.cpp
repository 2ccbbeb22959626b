#include "doctest.h"

#include "actorcap/lang_text.hpp"
#include "actorcap/syntax.hpp"
#include "corpus.hpp"

using namespace actorcap;
using namespace actorcap::testing;

TEST_CASE("tick program parses") {
  auto p = parse_program("msg tick : Unit  beh[<tick>*]{ tick(m) => self[0] }");
  REQUIRE(p.decls.size() == 1);
  CHECK(p.decls[0].name == "tick");
  CHECK(p.decls[0].payload->kind == TypeKind::Unit);
  auto* b = p.root->as<Beh>();
  REQUIRE(b);
  REQUIRE(b->cases.size() == 1);
  CHECK(p.alphabet.name(b->cases[0].msg) == "tick");
  CHECK(b->cases[0].binder == "m");
  auto* s = b->cases[0].body->as<SelfCap>();
  REQUIRE(s);
  CHECK(s->lang.is(LangKind::Empty));
}

TEST_CASE("send through a path") {
  auto p = parse_program("msg tick : Unit\nsend[tick](r.1, ())");
  auto* s = p.root->as<Send>();
  REQUIRE(s);
  CHECK(p.alphabet.name(s->msg) == "tick");
  CHECK(s->target.base == "r");
  CHECK(s->target.selectors == std::vector<int>{1});
  CHECK(s->payload->as<UnitLit>());
}

TEST_CASE("split carries both annotations") {
  auto p = parse_program(
      "msg act : Unit msg nop : Unit\n"
      "split r as r1: ActorRef[<act>], r2: ActorRef[<nop>*] in r1");
  auto* s = p.root->as<Split>();
  REQUIRE(s);
  CHECK(s->source.base == "r");
  CHECK(s->first.name == "r1");
  CHECK(s->second.name == "r2");
  REQUIRE(s->first.type->kind == TypeKind::ActorRef);
  CHECK(to_string(s->first.type->lang, p.alphabet) == "<act>");
  CHECK(to_string(s->second.type->lang, p.alphabet) == "<nop>*");
}

TEST_CASE("operator precedence") {
  auto p = parse_program("1 + 2 * 3 < 10 && not false || true");
  auto* top = p.root->as<BinOp>();
  REQUIRE(top);
  CHECK(top->op == BinOpKind::Or);
  auto* conj = top->lhs->as<BinOp>();
  REQUIRE(conj);
  CHECK(conj->op == BinOpKind::And);
  auto* lt = conj->lhs->as<BinOp>();
  REQUIRE(lt);
  CHECK(lt->op == BinOpKind::Lt);
  auto* add = lt->lhs->as<BinOp>();
  REQUIRE(add);
  CHECK(add->op == BinOpKind::Add);
  CHECK(add->rhs->as<BinOp>()->op == BinOpKind::Mul);
  CHECK(conj->rhs->as<Not>());
}

TEST_CASE("types") {
  auto p = parse_program("msg a : Nat * Bool * Unit -[<a>]-> ActorRef[<a>*] -[eps]-> Beh[0]\n()");
  const Type& t = *p.decls[0].payload;
  REQUIRE(t.kind == TypeKind::Fun);
  CHECK(t.left->kind == TypeKind::Prod);
  CHECK(t.left->right->kind == TypeKind::Prod);
  CHECK(t.right->kind == TypeKind::Fun);
  CHECK(to_string(t, p.alphabet) == "Nat * Bool * Unit -[<a>]-> ActorRef[<a>*] -[eps]-> Beh[0]");
}

TEST_CASE("parse errors carry position and expectations") {
  try {
    parse_program("msg a : Unit\nsend[a](r ())");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
    CHECK(e.loc().column == 11);
    CHECK(e.expected() == std::vector<std::string>{"','"});
  }
  CHECK_THROWS_AS(parse_program("self[<nope>]"), ParseError);
  CHECK_THROWS_AS(parse_program("msg a : Unit msg a : Nat ()"), ParseError);
  CHECK_THROWS_AS(parse_program("msg Unit : Nat ()"), ParseError);
  CHECK_THROWS_AS(parse_program("split r as x: Nat, x: Nat in x"), ParseError);
  CHECK_THROWS_AS(parse_program("let in = 1 in 2"), ParseError);
  CHECK_THROWS_AS(parse_program("x.3"), ParseError);
  CHECK_THROWS_AS(parse_program("99999999999999999999999"), ParseError);
  CHECK_THROWS_AS(parse_program("1 $ 2"), ParseError);
}

TEST_CASE("pretty printing") {
  auto p = parse_program("msg a : Unit\nbeh[(<a> # <a>) # 0]{}");
  auto text = pretty_print(p);
  CHECK(text.find("beh[(<a> # <a>) # 0]") != std::string::npos);
  CHECK(pretty_print(*parse_program("(1 - 2) - 3").root, Alphabet{}) == "1 - 2 - 3");
  CHECK(pretty_print(*parse_program("1 - (2 - 3)").root, Alphabet{}) == "1 - (2 - 3)");
  CHECK(pretty_print(*parse_program("f(x)(y)").root, Alphabet{}) == "f(x)(y)");
  CHECK(pretty_print(*parse_program("1 + (let x = 1 in x)").root, Alphabet{}) ==
        "1 + (let x = 1 in\nx)");
}

TEST_CASE("round trip on hand-written programs") {
  for (const char* src : {
           "()",
           "(1, (true, ()))",
           "not not (1 == 2)",
           "fun f(x: Nat): Nat => x",
           "fun f(x: Nat * Nat): Nat -[eps]-> Nat ! eps => fun g(y: Nat): Nat => x.1 + y",
           "(fun f(x: Nat): Nat => x)(3)",
           "spawn[eps](beh[eps]{})",
           "if a then if b then 1 else 2 else 3",
           "let x = let y = 1 in y in x",
       }) {
    CAPTURE(src);
    auto p = parse_program(src);
    auto q = parse_program(pretty_print(p));
    CHECK(same_program(p, q));
  }
}

TEST_CASE("round trip on the corpus") {
  for (const char* dir : {"positive", "negative"}) {
    for (const auto& file : corpus_files(dir)) {
      CAPTURE(file.string());
      auto p = parse_program(read_file(file));
      auto printed = pretty_print(p);
      auto q = parse_program(printed);
      CHECK(same_program(p, q));
      CHECK(pretty_print(q) == printed);
    }
  }
}

TEST_CASE("free variables") {
  auto p = parse_program(
      "msg a : Unit\n"
      "let x = y in fun f(z: Nat): Nat => f(z) + x + w + send[a](r.2, q)");
  CHECK(free_variables(*p.root) == std::set<std::string>{"y", "w", "r", "q"});
}
