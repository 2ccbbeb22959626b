#include "actorcap/runtime.hpp"

#include <algorithm>
#include <stdexcept>

namespace actorcap {

const char* to_string(StuckKind k) {
  switch (k) {
    case StuckKind::UnhandledMessage: return "UnhandledMessage";
    case StuckKind::HandlerDiverged: return "HandlerDiverged";
    case StuckKind::NonBehaviourResult: return "NonBehaviourResult";
    case StuckKind::DynamicTypeError: return "DynamicTypeError";
    case StuckKind::RootEvaluationDiverged: return "RootEvaluationDiverged";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Deliver: return "deliver";
    case EventKind::Send: return "send";
    case EventKind::Spawn: return "spawn";
    case EventKind::SelfCap: return "selfcap";
    case EventKind::Violation: return "violation";
    case EventKind::Halt: return "halt";
  }
  return "?";
}

std::vector<Endpoint> Trace::deliveries() const {
  std::vector<Endpoint> out;
  for (const Event& e : events)
    if (e.kind == EventKind::Deliver)
      out.emplace_back(*e.src, *e.dst);
  return out;
}

namespace {

struct Halted {};

std::optional<Value> read_path(const Bindings& env, const Path& p) {
  auto it = env.find(p.base);
  if (it == env.end())
    return std::nullopt;
  const Value* v = &it->second;
  for (int sel : p.selectors) {
    auto* pair = v->as<PairV>();
    if (!pair)
      return std::nullopt;
    v = sel == 1 ? pair->first.get() : pair->second.get();
  }
  return *v;
}

bool write_at(Value& node, const std::vector<int>& sel, std::size_t i, Value nv) {
  if (i == sel.size()) {
    node = std::move(nv);
    return true;
  }
  auto* pair = node.as<PairV>();
  if (!pair)
    return false;
  Value first = *pair->first, second = *pair->second;
  if (!write_at(sel[i] == 1 ? first : second, sel, i + 1, std::move(nv)))
    return false;
  node = make_pair_value(std::move(first), std::move(second));
  return true;
}

bool write_path(Bindings& env, const Path& p, Value nv) {
  auto it = env.find(p.base);
  return it != env.end() && write_at(it->second, p.selectors, 0, std::move(nv));
}

void remove_path(Bindings& env, const Path& p) {
  if (p.selectors.empty())
    env.erase(p.base);
  else
    write_path(env, p, Value{UnitV{}});
}

// Rebinds `name` for the dynamic extent of a body and restores any shadowed value.
class Scoped {
 public:
  Scoped(Bindings& env, const std::string& name, Value v) : env_(env), name_(name) {
    if (auto it = env.find(name); it != env.end())
      saved_ = std::move(it->second);
    env_[name_] = std::move(v);
  }
  ~Scoped() {
    if (saved_)
      env_[name_] = std::move(*saved_);
    else
      env_.erase(name_);
  }
  Scoped(const Scoped&) = delete;
  Scoped& operator=(const Scoped&) = delete;

 private:
  Bindings& env_;
  const std::string& name_;
  std::optional<Value> saved_;
};

class Interp {
 public:
  Interp(Config& c, ActorId self, Trace& trace, TurnObserver* obs, const RuntimeLimits& limits)
      : c_(c), self_(self), trace_(trace), obs_(obs), limits_(limits) {}

  Value eval(const Expr& e, Bindings& env) {
    if (++steps_ > limits_.local_steps)
      throw RuntimeFault{StuckKind::HandlerDiverged, "local step budget exhausted"};
    if (depth_ >= limits_.max_depth)
      throw RuntimeFault{StuckKind::HandlerDiverged, "evaluation nested too deeply"};
    ++depth_;
    struct Leave {
      std::uint32_t& d;
      ~Leave() { --d; }
    } leave{depth_};
    return std::visit([&](const auto& n) { return node(e, n, env); }, e.node);
  }

  LangExpr observed = eps();
  std::vector<std::pair<ActorId, Envelope>> out;

 private:
  [[noreturn]] static void dyn(const std::string& what) {
    throw RuntimeFault{StuckKind::DynamicTypeError, what};
  }

  void poll() {
    if (obs_ && obs_->halt_requested())
      throw Halted{};
  }

  void event(EventKind kind, ActorId src, ActorId dst, std::optional<MsgType> msg,
             std::optional<LangExpr> lang) {
    Event ev{kind, c_.step_count, src, dst, msg, std::move(lang), {}, {}};
    trace_.events.push_back(std::move(ev));
  }

  RefV fresh_ref(ActorId target, LangExpr tag) { return RefV{target, std::move(tag), c_.next_cap++}; }

  std::shared_ptr<const Bindings> capture(const Expr& e, const Bindings& env) {
    auto out = std::make_shared<Bindings>();
    for (const std::string& name : free_variables(e))
      if (auto it = env.find(name); it != env.end())
        out->emplace(name, it->second);
    return out;
  }

  bool consumes(const Expr& e) const {
    if (!c_.typed)
      return false;
    const NodeInfo* info = c_.typed->info(e.id);
    return info && info->consumes;
  }

  std::uint64_t nat(const Value& v) {
    if (auto* n = v.as<std::uint64_t>())
      return *n;
    dyn("expected a natural number");
  }

  bool boolean(const Value& v) {
    if (auto* b = v.as<bool>())
      return *b;
    dyn("expected a boolean");
  }

  Value node(const Expr&, const NatLit& n, Bindings&) { return Value{n.value}; }
  Value node(const Expr&, const BoolLit& b, Bindings&) { return Value{b.value}; }
  Value node(const Expr&, const UnitLit&, Bindings&) { return Value{UnitV{}}; }

  Value node(const Expr&, const Pair& p, Bindings& env) {
    Value a = eval(*p.first, env);
    return make_pair_value(std::move(a), eval(*p.second, env));
  }

  Value node(const Expr&, const BinOp& b, Bindings& env) {
    Value l = eval(*b.lhs, env);
    Value r = eval(*b.rhs, env);
    switch (b.op) {
      case BinOpKind::Or: return Value{boolean(l) || boolean(r)};
      case BinOpKind::And: return Value{boolean(l) && boolean(r)};
      case BinOpKind::Eq:
        if (l.as<bool>() && r.as<bool>())
          return Value{*l.as<bool>() == *r.as<bool>()};
        return Value{nat(l) == nat(r)};
      case BinOpKind::Lt: return Value{nat(l) < nat(r)};
      case BinOpKind::Add: {
        std::uint64_t x = nat(l), y = nat(r);
        if (x + y < x)
          dyn("natural number overflow");
        return Value{x + y};
      }
      case BinOpKind::Sub: {
        std::uint64_t x = nat(l), y = nat(r);
        return Value{x > y ? x - y : 0};
      }
      case BinOpKind::Mul: {
        std::uint64_t x = nat(l), y = nat(r);
        if (x != 0 && y > UINT64_MAX / x)
          dyn("natural number overflow");
        return Value{x * y};
      }
      case BinOpKind::Div: {
        std::uint64_t x = nat(l), y = nat(r);
        return Value{y == 0 ? 0 : x / y};
      }
    }
    dyn("unknown operator");
  }

  Value node(const Expr&, const Not& n, Bindings& env) { return Value{!boolean(eval(*n.operand, env))}; }

  Value node(const Expr&, const If& i, Bindings& env) {
    return boolean(eval(*i.cond, env)) ? eval(*i.then_branch, env) : eval(*i.else_branch, env);
  }

  Value node(const Expr& e, const Fun&, Bindings& env) { return Value{ClosureV{&e, capture(e, env)}}; }

  Value node(const Expr&, const App& a, Bindings& env) {
    Value fv = eval(*a.fn, env);
    Value arg = eval(*a.arg, env);
    auto* cl = fv.as<ClosureV>();
    if (!cl)
      dyn("applying a non-function");
    const Fun& f = *cl->fun->as<Fun>();
    Bindings callee = *cl->captured;
    callee[f.name] = fv;
    callee[f.param] = std::move(arg);
    return eval(*f.body, callee);
  }

  Value node(const Expr&, const SelfCap& s, Bindings&) {
    RefV r = fresh_ref(self_, s.lang);
    observed = shuffle(observed, s.lang);
    event(EventKind::SelfCap, self_, self_, std::nullopt, s.lang);
    if (obs_) {
      obs_->self_cap(self_, r);
      poll();
    }
    return Value{r};
  }

  Value node(const Expr& e, const Beh& b, Bindings& env) {
    return Value{BehaviourV{b.annotation, &e, capture(e, env)}};
  }

  Value node(const Expr&, const Spawn& s, Bindings& env) {
    Value bv = eval(*s.behaviour, env);
    auto* b = bv.as<BehaviourV>();
    if (!b)
      dyn("spawning a non-behaviour");
    ActorId child = c_.next_id++;
    RefV r = fresh_ref(child, s.cap ? *s.cap : b->annotation);
    c_.store[child] = bv;
    event(EventKind::Spawn, self_, child, std::nullopt, r.tag);
    if (obs_) {
      obs_->spawned(self_, r, bv);
      poll();
    }
    return Value{r};
  }

  Value node(const Expr&, const Send& s, Bindings& env) {
    std::optional<Value> target = read_path(env, s.target);
    if (!target)
      dyn("unbound send target '" + s.target.base + "'");
    auto* ref = target->as<RefV>();
    if (!ref)
      dyn("sending to a non-reference");
    RefV before = *ref;
    Value payload = eval(*s.payload, env);
    LangExpr residual = derivative(s.msg, before.tag);
    if (auto cur = read_path(env, s.target); cur && cur->as<RefV>() && cur->as<RefV>()->cap == before.cap)
      write_path(env, s.target, Value{RefV{before.target, residual, before.cap}});
    event(EventKind::Send, self_, before.target, s.msg, std::nullopt);
    out.push_back({before.target, Envelope{payload, s.msg}});
    if (obs_) {
      obs_->sent(self_, before, s.msg, residual, payload);
      poll();
    }
    return Value{UnitV{}};
  }

  std::pair<Value, Value> split_value(const Value& v, const Type& a, const Type& b) {
    if (auto* r = v.as<RefV>(); r && a.kind == TypeKind::ActorRef && b.kind == TypeKind::ActorRef) {
      RefV ra = fresh_ref(r->target, a.lang), rb = fresh_ref(r->target, b.lang);
      if (obs_) {
        obs_->split(self_, *r, ra, rb);
        poll();
      }
      return {Value{ra}, Value{rb}};
    }
    if (auto* p = v.as<PairV>(); p && a.kind == TypeKind::Prod && b.kind == TypeKind::Prod) {
      auto [a1, b1] = split_value(*p->first, *a.left, *b.left);
      auto [a2, b2] = split_value(*p->second, *a.right, *b.right);
      return {make_pair_value(std::move(a1), std::move(a2)),
              make_pair_value(std::move(b1), std::move(b2))};
    }
    return {v, v};
  }

  Value node(const Expr&, const Split& s, Bindings& env) {
    std::optional<Value> src = read_path(env, s.source);
    if (!src)
      dyn("unbound split source '" + s.source.base + "'");
    auto [a, b] = split_value(*src, *s.first.type, *s.second.type);
    remove_path(env, s.source);
    Scoped sa(env, s.first.name, std::move(a));
    Scoped sb(env, s.second.name, std::move(b));
    return eval(*s.body, env);
  }

  Value node(const Expr&, const Let& l, Bindings& env) {
    Value bound = eval(*l.bound, env);
    Scoped scope(env, l.name, std::move(bound));
    return eval(*l.body, env);
  }

  Value node(const Expr& e, const Var& v, Bindings& env) {
    std::optional<Value> val = read_path(env, v.path);
    if (!val)
      dyn("unbound variable '" + v.path.base + "'");
    if (consumes(e))
      remove_path(env, v.path);
    return std::move(*val);
  }

  Config& c_;
  ActorId self_;
  Trace& trace_;
  TurnObserver* obs_;
  const RuntimeLimits& limits_;
  std::uint64_t steps_ = 0;
  std::uint32_t depth_ = 0;
};

const Case* find_case(const BehaviourV& b, MsgType m) {
  for (const Case& c : b.beh->as<Beh>()->cases)
    if (c.msg == m)
      return &c;
  return nullptr;
}

}  // namespace

LocalResult local_eval(Config& c, ActorId self, Bindings env, const Expr& e, Trace& trace,
                       TurnObserver* obs, const RuntimeLimits& limits) {
  Interp it(c, self, trace, obs, limits);
  Value v = it.eval(e, env);
  return {std::move(v), std::move(it.out), std::move(it.observed)};
}

TurnResult init_config(Config& c, Trace& trace, TurnObserver* obs, const RuntimeLimits& limits) {
  if (!c.program)
    throw std::invalid_argument("init_config: no program");
  c.store.clear();
  c.queues.clear();
  c.next_id = 1;
  c.next_cap = 0;
  c.step_count = 0;
  c.queues[{0, 0}].push_back(Envelope{Value{UnitV{}}, Alphabet::unit});
  TurnResult res;
  try {
    if (obs)
      obs->turn_begin(c, 0, nullptr, nullptr);
    Interp it(c, 0, trace, obs, limits);
    Bindings env;
    Value v = it.eval(*c.program->root, env);
    if (!v.as<BehaviourV>()) {
      res.stuck = StuckKind::NonBehaviourResult;
      res.detail = "root evaluated to " + to_string(v, c.program->alphabet);
      return res;
    }
    c.store[0] = std::move(v);
    for (auto& [dst, env_out] : it.out)
      c.queues[{0, dst}].push_back(std::move(env_out));
    if (obs) {
      obs->turn_end(c, 0, std::nullopt, it.observed);
      res.halted = obs->halt_requested();
    }
  } catch (const RuntimeFault& f) {
    res.stuck = f.kind == StuckKind::HandlerDiverged ? StuckKind::RootEvaluationDiverged : f.kind;
    res.detail = f.detail;
  } catch (const Halted&) {
    res.halted = true;
  }
  return res;
}

std::vector<Enabled> enabled_deliveries(const Config& c) {
  std::vector<Enabled> out;
  for (const auto& [ep, q] : c.queues)
    if (!q.empty())
      out.push_back({ep, q.front().msg});
  std::sort(out.begin(), out.end(), [](const Enabled& a, const Enabled& b) {
    return std::pair(a.endpoint.second, a.endpoint.first) < std::pair(b.endpoint.second, b.endpoint.first);
  });
  return out;
}

TurnResult deliver(Config& c, Endpoint choice, Trace& trace, TurnObserver* obs,
                   const RuntimeLimits& limits) {
  auto qit = c.queues.find(choice);
  if (qit == c.queues.end() || qit->second.empty())
    throw std::invalid_argument("deliver: queue is empty");
  Envelope msg = std::move(qit->second.front());
  qit->second.pop_front();
  if (qit->second.empty())
    c.queues.erase(qit);
  auto [src, dst] = choice;
  ++c.step_count;
  trace.events.push_back(Event{EventKind::Deliver, c.step_count, src, dst, msg.msg, std::nullopt, {}, {}});

  TurnResult res;
  auto sit = c.store.find(dst);
  if (sit == c.store.end())
    throw std::invalid_argument("deliver: unknown actor");
  Value old = sit->second;
  const auto& b = *old.as<BehaviourV>();
  const Case* k = find_case(b, msg.msg);
  if (!k) {
    res.stuck = StuckKind::UnhandledMessage;
    res.detail = "actor " + std::to_string(dst) + " has no case for " +
                 c.program->alphabet.name(msg.msg);
    return res;
  }
  try {
    if (obs)
      obs->turn_begin(c, dst, &old, &msg.payload);
    Bindings env = *b.captured;
    env[k->binder] = msg.payload;
    Interp it(c, dst, trace, obs, limits);
    Value v = it.eval(*k->body, env);
    if (!v.as<BehaviourV>()) {
      res.stuck = StuckKind::NonBehaviourResult;
      res.detail = "handler returned " + to_string(v, c.program->alphabet);
      return res;
    }
    c.store[dst] = std::move(v);
    for (auto& [to, out] : it.out)
      c.queues[{dst, to}].push_back(std::move(out));
    if (obs) {
      obs->turn_end(c, dst, k->body->id, it.observed);
      res.halted = obs->halt_requested();
    }
  } catch (const RuntimeFault& f) {
    res.stuck = f.kind;
    res.detail = f.detail;
  } catch (const Halted&) {
    res.halted = true;
  }
  return res;
}

}  // namespace actorcap
