#include "doctest.h"

#include <json.hpp>

#include "actorcap/lang_text.hpp"
#include "actorcap/scheduler.hpp"
#include "corpus.hpp"

using namespace actorcap;
using namespace actorcap::testing;

namespace {

struct Loaded {
  Program prog;
  std::optional<TypedProgram> typed;

  explicit Loaded(const std::string& text, bool check = true) : prog(parse_program(text)) {
    if (check)
      typed = check_program(prog);
  }
  const TypedProgram* t() const { return typed ? &*typed : nullptr; }
};

Loaded load(const std::string& rel, bool check = true) {
  return Loaded(read_file(corpus_dir() / rel), check);
}

// Evaluates `expr` as actor 0 of an otherwise empty configuration.
struct Local {
  Program prog;
  Config cfg;
  Trace trace;

  Local(const std::string& decls, const std::string& expr) : prog(parse_program(decls + "\n" + expr)) {
    cfg.program = &prog;
    cfg.next_id = 1;
  }
  LocalResult eval(const RuntimeLimits& limits = {}) {
    return local_eval(cfg, 0, {}, *prog.root, trace, nullptr, limits);
  }
  StuckKind fault() {
    try {
      eval();
    } catch (const RuntimeFault& f) {
      return f.kind;
    }
    FAIL("no fault");
    return StuckKind::UnhandledMessage;
  }
};

std::uint64_t nat_of(const Value& v) {
  REQUIRE(v.as<std::uint64_t>());
  return *v.as<std::uint64_t>();
}

std::vector<EventKind> kinds_without_violations(const Trace& t) {
  std::vector<EventKind> out;
  for (const Event& e : t.events)
    if (e.kind != EventKind::Violation)
      out.push_back(e.kind);
  return out;
}

}  // namespace

TEST_CASE("local evaluation of pure expressions") {
  CHECK(nat_of(Local("", "2 + 3 * 4").eval().value) == 14);
  CHECK(nat_of(Local("", "3 - 5").eval().value) == 0);
  CHECK(nat_of(Local("", "7 / 0").eval().value) == 0);
  CHECK(nat_of(Local("", "7 / 2").eval().value) == 3);
  CHECK(*Local("", "1 < 2 && not (2 == 3)").eval().value.as<bool>());
  CHECK(nat_of(Local("", "let p = (1, (2, 3)) in p.2.1 + p.1").eval().value) == 3);
  CHECK(nat_of(Local("", "if 1 < 0 then 10 else 20").eval().value) == 20);
  CHECK(nat_of(Local("", "let q = (1, 2) in split q as a: Nat * Nat, b: Nat * Nat in a.1 + b.2").eval().value) == 3);
  CHECK(nat_of(Local("", "let x = 1 in (let x = 5 in x) + x").eval().value) == 6);
}

TEST_CASE("closures capture their environment and recurse through their own name") {
  CHECK(nat_of(Local("", "let k = 10 in let add = fun add(n: Nat): Nat => n + k in add(5)").eval().value) == 15);
  CHECK(nat_of(Local("", "(fun fact(n: Nat): Nat => if n < 1 then 1 else n * fact(n - 1))(5)").eval().value) ==
        120);
}

TEST_CASE("local faults") {
  CHECK(Local("", "(fun loop(n: Nat): Nat => loop(n))(0)").fault() == StuckKind::HandlerDiverged);
  CHECK(Local("", "1 + true").fault() == StuckKind::DynamicTypeError);
  CHECK(Local("", "3(4)").fault() == StuckKind::DynamicTypeError);
  CHECK(Local("", "spawn(3)").fault() == StuckKind::DynamicTypeError);
  CHECK(Local("msg a : Unit", "send[a](x, ())").fault() == StuckKind::DynamicTypeError);

  Local deep("", "(fun count(n: Nat): Nat => if n == 0 then 0 else count(n - 1))(100000)");
  RuntimeLimits small{1000, 4000};
  CHECK_THROWS_AS(deep.eval(small), RuntimeFault);
}

TEST_CASE("observed effect is the ordered shuffle of self capabilities") {
  Local l("msg a : Unit\nmsg b : Unit", "let x = self[<a>] in let y = self[<b>.<b>] in ()");
  LocalResult r = l.eval();
  CHECK(equiv(r.observed, parse_lang("<a> # <b>.<b>", l.prog.alphabet)));
  std::vector<LangExpr> seen;
  for (const Event& e : l.trace.events)
    if (e.kind == EventKind::SelfCap)
      seen.push_back(*e.lang);
  REQUIRE(seen.size() == 2);
  CHECK(equiv(r.observed, shuffle(seen[0], seen[1])));
}

TEST_CASE("sends update the tag at the path and queue in order") {
  Local l("msg a : Unit\nmsg b : Unit",
          "let r = spawn[<a>.<b>.<a>](beh[eps]{}) in "
          "let _ = send[a](r, ()) in let _ = send[b](r, ()) in r");
  LocalResult res = l.eval();
  auto* ref = res.value.as<RefV>();
  REQUIRE(ref);
  CHECK(ref->target == 1);
  CHECK(equiv(ref->tag, parse_lang("<a>", l.prog.alphabet)));
  REQUIRE(res.out.size() == 2);
  CHECK(l.prog.alphabet.name(res.out[0].second.msg) == "a");
  CHECK(l.prog.alphabet.name(res.out[1].second.msg) == "b");
  CHECK(l.cfg.store.count(1) == 1);
}

TEST_CASE("runtime split gives each half its annotation") {
  Local l("msg nop : Unit\nmsg act : Unit",
          "let w = spawn[<nop>*.<act>.<nop>*](beh[eps]{}) in "
          "split w as a: ActorRef[<act>], n: ActorRef[<nop>*] in (a, n)");
  Value v = l.eval().value;
  auto* p = v.as<PairV>();
  REQUIRE(p);
  CHECK(p->first->as<RefV>()->tag == parse_lang("<act>", l.prog.alphabet));
  CHECK(p->second->as<RefV>()->tag == parse_lang("<nop>*", l.prog.alphabet));
  CHECK(p->first->as<RefV>()->cap != p->second->as<RefV>()->cap);
}

TEST_CASE("initial configuration") {
  Loaded c = load("positive/ping_pong.acap");
  Config cfg;
  cfg.program = &c.prog;
  cfg.typed = c.t();
  Trace trace;
  REQUIRE(init_config(cfg, trace).ok());
  CHECK(cfg.store.count(0) == 1);
  auto en = enabled_deliveries(cfg);
  REQUIRE(!en.empty());
  CHECK(en[0].endpoint == Endpoint{0, 0});
  CHECK(en[0].msg == Alphabet::unit);

  Loaded bad("42", false);
  Config b;
  b.program = &bad.prog;
  CHECK(init_config(b, trace).stuck == StuckKind::NonBehaviourResult);
}

TEST_CASE("counter under a small delivery budget") {
  Loaded c = load("positive/counter.acap");
  RunOptions opts;
  opts.max_deliveries = 5;
  RunResult r = run(c.prog, c.t(), opts);
  CHECK(r.outcome.kind == Outcome::Kind::Quiescent);
  CHECK(r.trace.deliveries().size() == 1);
}

TEST_CASE("delivery budget") {
  Loaded c = load("positive/tick_loop.acap");
  RunOptions opts;
  opts.max_deliveries = 2;
  RunResult r = run(c.prog, c.t(), opts);
  CHECK(r.outcome.kind == Outcome::Kind::Budget);
  CHECK(r.trace.deliveries().size() == 2);
}

TEST_CASE("an unchecked double send gets stuck") {
  Loaded c = load("negative/double_send.acap", false);
  RunResult r = run(c.prog, nullptr, {});
  CHECK(r.outcome.kind == Outcome::Kind::Stuck);
  CHECK(r.outcome.stuck == StuckKind::UnhandledMessage);
  CHECK(r.trace.deliveries().size() <= 3);
  CHECK(r.trace.events.back().kind == EventKind::Halt);
}

TEST_CASE("unchecked handler results") {
  Loaded c("msg a : Unit\nbeh[<Unit>]{ Unit(u) => 3 }", false);
  CHECK(run(c.prog, nullptr, {}).outcome.stuck == StuckKind::NonBehaviourResult);
  Loaded d("beh[<Unit>]{ Unit(u) => (fun f(n: Nat): Nat => f(n))(0) }", false);
  CHECK(run(d.prog, nullptr, {}).outcome.stuck == StuckKind::HandlerDiverged);
}

TEST_CASE("runs are deterministic in the seed") {
  for (const auto& f : corpus_files("positive")) {
    Loaded c(read_file(f));
    for (std::uint64_t seed : {0u, 1u, 7u}) {
      RunOptions o;
      o.seed = seed;
      RunResult r1 = run(c.prog, c.t(), o), r2 = run(c.prog, c.t(), o);
      auto a = trace_to_jsonl(r1.trace, r1.outcome, c.prog.alphabet);
      auto b = trace_to_jsonl(r2.trace, r2.outcome, c.prog.alphabet);
      CHECK_MESSAGE(a == b, f.filename().string());
    }
  }
}

TEST_CASE("trace properties over the positive corpus") {
  for (const auto& f : corpus_files("positive")) {
    INFO(f.filename().string());
    Loaded c(read_file(f));
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      RunOptions o;
      o.seed = seed;
      RunResult r = run(c.prog, c.t(), o);

      // FIFO per endpoint: deliveries are a prefix of sends on every endpoint.
      std::map<Endpoint, std::vector<MsgType>> sent, delivered;
      sent[{0, 0}].push_back(Alphabet::unit);
      for (const Event& e : r.trace.events) {
        if (e.kind == EventKind::Send)
          sent[{*e.src, *e.dst}].push_back(*e.msg);
        if (e.kind == EventKind::Deliver)
          delivered[{*e.src, *e.dst}].push_back(*e.msg);
      }
      for (const auto& [ep, ms] : delivered) {
        const auto& s = sent[ep];
        REQUIRE(ms.size() <= s.size());
        CHECK(std::equal(ms.begin(), ms.end(), s.begin()));
      }

      // Store monotonicity: every allocated id still has a behaviour.
      for (ActorId id = 0; id < r.final_config.next_id; ++id)
        CHECK(r.final_config.store.count(id) == 1);

      // Instrumentation neutrality.
      RunOptions off = o;
      off.monitor = false;
      RunResult plain = run(c.prog, c.t(), off);
      CHECK(kinds_without_violations(plain.trace) == kinds_without_violations(r.trace));
      CHECK(plain.trace.deliveries() == r.trace.deliveries());
      CHECK(plain.outcome.label() == r.outcome.label());

      // Replaying the recorded schedule reproduces the trace.
      RunResult again = replay(c.prog, c.t(), r.trace.deliveries());
      CHECK(trace_to_jsonl(again.trace, r.outcome, c.prog.alphabet) ==
            trace_to_jsonl(r.trace, r.outcome, c.prog.alphabet));
    }
  }
}

TEST_CASE("exploring the counter") {
  Loaded c = load("positive/counter.acap");
  ExploreOptions o;
  o.max_depth = 4;
  ExplorationReport r = explore(c.prog, c.t(), o);
  CHECK(r.schedules == 1);
  REQUIRE(r.outcomes.count("quiescent"));
  CHECK(r.outcomes.at("quiescent").count == 1);
}

TEST_CASE("two independent senders give two interleavings") {
  Program p = parse_program(
      "msg x : Unit\nmsg y : Unit\n"
      "beh[<x> # <y>]{ x(v) => beh[<y>]{ y(w) => beh[eps]{} }; y(v) => beh[<x>]{ x(w) => beh[eps]{} } }");
  Config cfg;
  cfg.program = &p;
  Trace trace;
  cfg.store[0] = local_eval(cfg, 0, {}, *p.root, trace).value;
  Program idle = parse_program("beh[eps]{}");
  cfg.store[1] = cfg.store[2] = local_eval(cfg, 1, {}, *idle.root, trace).value;
  cfg.next_id = 3;
  cfg.queues[{1, 0}].push_back({Value{UnitV{}}, *p.alphabet.find("x")});
  cfg.queues[{2, 0}].push_back({Value{UnitV{}}, *p.alphabet.find("y")});
  ExploreOptions o;
  o.monitor = false;
  ExplorationReport r = explore(cfg, o);
  CHECK(r.schedules == 2);
  CHECK(r.outcomes.at("quiescent").count == 2);
}

TEST_CASE("depth bound and schedule budget") {
  Loaded c = load("positive/tick_loop.acap");
  ExploreOptions o;
  o.max_depth = 1;
  ExplorationReport r = explore(c.prog, c.t(), o);
  CHECK(r.outcomes.count("depth-bound") == 1);

  Loaded s = load("positive/two_senders.acap");
  ExploreOptions tight;
  tight.max_schedules = 2;
  CHECK_THROWS_AS(explore(s.prog, s.t(), tight), ScheduleBudgetExceeded);
}

TEST_CASE("well-typed corpus never gets stuck") {
  for (const auto& f : corpus_files("positive")) {
    Loaded c(read_file(f));
    ExplorationReport r = explore(c.prog, c.t(), {});
    CHECK_MESSAGE(r.stuck_schedules() == 0, f.filename().string());
    CHECK(r.schedules >= 1);
  }
}

TEST_CASE("trace JSON lines") {
  Loaded c = load("positive/restricted_spawn.acap");
  RunResult r = run(c.prog, c.t(), {});
  std::string text = trace_to_jsonl(r.trace, r.outcome, c.prog.alphabet);
  std::istringstream in(text);
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);)
    lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == r.trace.events.size() + 1);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i)
    for (const char* field : {"step", "kind", "src", "dst", "msg", "lang"})
      CHECK(lines[i].contains(field));
  CHECK(lines.back() == nlohmann::json{{"outcome", "quiescent"}});
  bool spawn_seen = false;
  for (const auto& j : lines)
    if (j.value("kind", "") == "spawn") {
      spawn_seen = true;
      CHECK(j["lang"] == "<act>");
    }
  CHECK(spawn_seen);
}
