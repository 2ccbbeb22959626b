#pragma once

// Executable semantics: big-step local evaluation inside one actor turn, and
// global delivery over per-endpoint FIFO queues.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actorcap/typecheck.hpp"
#include "actorcap/value.hpp"

namespace actorcap {

struct Envelope {
  Value payload;
  MsgType msg;
};

using Endpoint = std::pair<ActorId, ActorId>;  // (src, dst)

/// Program and typing information must outlive every Config built from them.
/// `typed` is null when running without the checker.
struct Config {
  const Program* program = nullptr;
  const TypedProgram* typed = nullptr;
  std::map<ActorId, Value> store;  // installed behaviours
  std::map<Endpoint, std::deque<Envelope>> queues;
  ActorId next_id = 0;
  CapId next_cap = 0;
  std::uint64_t step_count = 0;  // deliveries so far
};

enum class StuckKind {
  UnhandledMessage,
  HandlerDiverged,
  NonBehaviourResult,
  DynamicTypeError,
  RootEvaluationDiverged,
};

const char* to_string(StuckKind k);

enum class EventKind { Deliver, Send, Spawn, SelfCap, Violation, Halt };

const char* to_string(EventKind k);

struct Event {
  EventKind kind;
  std::uint64_t step = 0;
  std::optional<ActorId> src, dst;
  std::optional<MsgType> msg;
  std::optional<LangExpr> lang;
  std::string violation;  // Violation: the kind
  std::string detail;     // Violation: the failing inclusion; Halt: the outcome
};

struct Trace {
  std::uint64_t seed = 0;
  std::vector<Event> events;

  std::vector<Endpoint> deliveries() const;
};

struct RuntimeLimits {
  std::uint64_t local_steps = 100'000;
  std::uint32_t max_depth = 4'000;  // nested evaluation frames
};

/// Instrumentation points. The runtime reports; it never consults the answers
/// except to halt when the observer asks it to.
class TurnObserver {
 public:
  virtual ~TurnObserver() = default;
  virtual void turn_begin(const Config&, ActorId, const Value* /*old_behaviour*/,
                          const Value* /*payload*/) {}
  virtual void self_cap(ActorId, const RefV&) {}
  virtual void spawned(ActorId, const RefV&, const Value& /*behaviour*/) {}
  virtual void sent(ActorId, const RefV& /*via*/, MsgType, const LangExpr& /*residual*/,
                    const Value& /*payload*/) {}
  virtual void split(ActorId, const RefV& /*source*/, const RefV& /*first*/, const RefV& /*second*/) {}
  // The case body is empty for the root evaluation.
  virtual void turn_end(const Config&, ActorId, std::optional<NodeId> /*case_body*/,
                        const LangExpr& /*observed*/) {}
  virtual bool halt_requested() const { return false; }
};

struct TurnResult {
  std::optional<StuckKind> stuck;
  bool halted = false;  // the observer asked to stop
  std::string detail;

  bool ok() const { return !stuck && !halted; }
};

struct LocalResult {
  Value value;
  std::vector<std::pair<ActorId, Envelope>> out;  // in send order
  LangExpr observed;
};

/// Evaluates `e` as actor `self` would. Spawns are installed in `c` directly.
/// Throws RuntimeFault.
LocalResult local_eval(Config& c, ActorId self, Bindings env, const Expr& e, Trace& trace,
                       TurnObserver* obs = nullptr, const RuntimeLimits& limits = {});

struct RuntimeFault {
  StuckKind kind;
  std::string detail;
};

/// Evaluates the root as actor 0 and queues the start-up Unit message ahead of
/// anything the root sends.
TurnResult init_config(Config& c, Trace& trace, TurnObserver* obs = nullptr,
                       const RuntimeLimits& limits = {});

/// Nonempty queues with their head message, ordered by (dst, src).
struct Enabled {
  Endpoint endpoint;
  MsgType msg;
};
std::vector<Enabled> enabled_deliveries(const Config& c);

TurnResult deliver(Config& c, Endpoint choice, Trace& trace, TurnObserver* obs = nullptr,
                   const RuntimeLimits& limits = {});

}  // namespace actorcap
