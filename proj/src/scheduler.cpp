#include "actorcap/scheduler.hpp"

#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "actorcap/lang_text.hpp"

namespace actorcap {

std::string Outcome::label() const {
  switch (kind) {
    case Kind::Quiescent: return "quiescent";
    case Kind::Stuck: return std::string("stuck:") + to_string(stuck);
    case Kind::Budget: return "budget";
    case Kind::DepthBound: return "depth-bound";
    case Kind::Halted: return "violation";
  }
  return "?";
}

std::size_t ExplorationReport::stuck_schedules() const {
  std::size_t n = 0;
  for (const auto& [label, cls] : outcomes)
    if (label.rfind("stuck:", 0) == 0)
      n += cls.count;
  return n;
}

namespace {

// One execution in progress: configuration, trace and optional monitor.
struct Sim {
  Config config;
  Trace trace;
  std::optional<Monitor> monitor;

  Sim(const Program& p, const TypedProgram* typed, bool monitored, bool strict) {
    config.program = &p;
    config.typed = typed;
    if (monitored)
      monitor.emplace(p, typed, MonitorOptions{strict, true});
  }
  Sim(const Sim& o) : config(o.config), trace(o.trace), monitor(o.monitor) {}

  TurnObserver* observer() {
    if (!monitor)
      return nullptr;
    monitor->attach(&trace);
    return &*monitor;
  }

  // Nothing when the turn went through; otherwise how execution ended.
  std::optional<Outcome> settle(const TurnResult& r, std::optional<Endpoint> at) {
    if (r.ok())
      return std::nullopt;
    Outcome o;
    if (r.stuck) {
      o.kind = Outcome::Kind::Stuck;
      o.stuck = *r.stuck;
    } else {
      o.kind = Outcome::Kind::Halted;
    }
    o.detail = r.detail;
    Event halt{EventKind::Halt, config.step_count, {}, {}, std::nullopt, std::nullopt, {}, o.label()};
    if (at) {
      halt.src = at->first;
      halt.dst = at->second;
    }
    trace.events.push_back(std::move(halt));
    return o;
  }

  std::optional<Outcome> init(const RuntimeLimits& limits) {
    return settle(init_config(config, trace, observer(), limits), std::nullopt);
  }

  std::optional<Outcome> step(Endpoint e, const RuntimeLimits& limits) {
    return settle(deliver(config, e, trace, observer(), limits), e);
  }
};

RunResult finish(Sim& sim, Outcome o) {
  RunResult r;
  r.outcome = std::move(o);
  if (sim.monitor) {
    r.violations = sim.monitor->violations();
    r.conservation = sim.monitor->conservation_failures();
  }
  r.trace = std::move(sim.trace);
  r.final_config = std::move(sim.config);
  return r;
}

RunResult drive(const Program& p, const TypedProgram* typed, const RunOptions& opts,
                const std::function<std::optional<Endpoint>(const std::vector<Enabled>&, std::size_t)>& choose) {
  Sim sim(p, typed, opts.monitor, opts.strict);
  sim.trace.seed = opts.seed;
  if (auto o = sim.init(opts.limits))
    return finish(sim, *o);
  for (std::size_t n = 0;; ++n) {
    auto enabled = enabled_deliveries(sim.config);
    if (enabled.empty())
      return finish(sim, Outcome{Outcome::Kind::Quiescent, {}, {}});
    if (n == opts.max_deliveries)
      return finish(sim, Outcome{Outcome::Kind::Budget, {}, {}});
    auto pick = choose(enabled, n);
    if (!pick)
      return finish(sim, Outcome{Outcome::Kind::Budget, {}, "schedule exhausted"});
    if (auto o = sim.step(*pick, opts.limits))
      return finish(sim, *o);
  }
}

}  // namespace

RunResult run(const Program& p, const TypedProgram* typed, const RunOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  return drive(p, typed, opts, [&](const std::vector<Enabled>& en, std::size_t) {
    return std::optional(en[rng() % en.size()].endpoint);
  });
}

RunResult replay(const Program& p, const TypedProgram* typed, const std::vector<Endpoint>& schedule,
                 const RunOptions& opts) {
  RunOptions o = opts;
  o.max_deliveries = schedule.size() + 1;
  return drive(p, typed, o, [&](const std::vector<Enabled>& en, std::size_t n) -> std::optional<Endpoint> {
    if (n >= schedule.size())
      return std::nullopt;
    for (const Enabled& e : en)
      if (e.endpoint == schedule[n])
        return e.endpoint;
    return std::nullopt;
  });
}

namespace {

// `root` is either uninitialized or ready for its first delivery.
ExplorationReport explore_from(Sim root, bool needs_init, const ExploreOptions& opts) {
  ExplorationReport rep;

  auto leaf = [&](Sim& sim, Outcome o) {
    if (++rep.schedules > opts.max_schedules)
      throw ScheduleBudgetExceeded("more than " + std::to_string(opts.max_schedules) + " schedules");
    auto& cls = rep.outcomes[o.label()];
    if (cls.count++ == 0)
      cls.witness = sim.trace;
    bool flagged = false;
    if (sim.monitor) {
      std::set<std::string> kinds;
      for (const Violation& v : sim.monitor->violations()) {
        kinds.insert(to_string(v.kind));
        flagged |= v.kind != ViolationKind::EffectExceeded;
      }
      for (const std::string& k : kinds) {
        auto& vc = rep.violations[k];
        if (vc.count++ == 0)
          vc.witness = sim.trace;
      }
      rep.conservation_turns += sim.monitor->turns_audited();
      const auto& cf = sim.monitor->conservation_failures();
      if (std::any_of(cf.begin(), cf.end(), [](const ConservationFailure& f) { return !f.included; }))
        ++rep.conservation_inclusion_failures;
      if (!cf.empty()) {
        ++rep.conservation_failures;
        for (std::size_t i = 0; i < cf.size() && rep.conservation_examples.size() < 5; ++i)
          rep.conservation_examples.push_back(cf[i]);
      }
    }
    if (o.kind == Outcome::Kind::Stuck && o.stuck == StuckKind::UnhandledMessage && !flagged)
      ++rep.unflagged_stuck;
  };

  std::function<void(Sim&, std::size_t)> dfs = [&](Sim& sim, std::size_t depth) {
    auto enabled = enabled_deliveries(sim.config);
    if (enabled.empty())
      return leaf(sim, Outcome{Outcome::Kind::Quiescent, {}, {}});
    if (depth == opts.max_depth)
      return leaf(sim, Outcome{Outcome::Kind::DepthBound, {}, {}});
    for (const Enabled& e : enabled) {
      Sim child = sim;
      if (auto o = child.step(e.endpoint, opts.limits))
        leaf(child, *o);
      else
        dfs(child, depth + 1);
    }
  };

  std::optional<Outcome> o;
  if (needs_init)
    o = root.init(opts.limits);
  if (o)
    leaf(root, *o);
  else
    dfs(root, 0);
  return rep;
}

}  // namespace

ExplorationReport explore(const Program& p, const TypedProgram* typed, const ExploreOptions& opts) {
  return explore_from(Sim(p, typed, opts.monitor, false), true, opts);
}

ExplorationReport explore(const Config& start, const ExploreOptions& opts) {
  Sim root(*start.program, start.typed, opts.monitor, false);
  root.config = start;
  return explore_from(std::move(root), false, opts);
}

std::string trace_to_jsonl(const Trace& t, const Outcome& outcome, const Alphabet& alphabet) {
  using nlohmann::ordered_json;
  std::ostringstream out;
  for (const Event& e : t.events) {
    ordered_json j;
    j["step"] = e.step;
    j["kind"] = to_string(e.kind);
    j["src"] = e.src ? ordered_json(*e.src) : ordered_json(nullptr);
    j["dst"] = e.dst ? ordered_json(*e.dst) : ordered_json(nullptr);
    j["msg"] = e.msg ? ordered_json(alphabet.name(*e.msg)) : ordered_json(nullptr);
    j["lang"] = e.lang ? ordered_json(to_string(*e.lang, alphabet)) : ordered_json(nullptr);
    if (e.kind == EventKind::Violation)
      j["violation"] = e.violation;
    if (!e.detail.empty())
      j["detail"] = e.detail;
    out << j.dump() << '\n';
  }
  ordered_json last;
  last["outcome"] = outcome.label();
  out << last.dump() << '\n';
  return out.str();
}

}  // namespace actorcap
