#pragma once

// Dynamic capability monitor. Tags on references are checked at every send and
// split, static case effects are compared against observed self-capabilities,
// and the whole configuration is checked for consistency between deliveries.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "actorcap/runtime.hpp"

namespace actorcap {

enum class ViolationKind { SendNotPermitted, GlobalInvariantBroken, EffectExceeded };

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  ActorId actor;
  std::string detail;  // the failing inclusion, pretty-printed
};

/// The residual tag after sending `msg`, or nothing when the tag forbids it.
std::optional<LangExpr> check_send_tag(const LangExpr& tag, MsgType msg);

/// Whether a reference tagged `tag` may be split into copies tagged `l1` and `l2`.
bool split_tag(const LangExpr& tag, const LangExpr& l1, const LangExpr& l2);

/// Whether the observed self-capabilities stay within the handler's static effect.
bool effect_conformance(const LangExpr& static_effect, const LangExpr& observed);

/// Live tags by target: every reference held in a stored behaviour or carried by
/// an in-flight message.
using CapSummary = std::multimap<ActorId, LangExpr>;

CapSummary summarize(const Config& c);
LangExpr combined(const CapSummary& s, ActorId target);

/// Memoizes inclusion queries; shared freely between exploration branches.
class InclusionCache {
 public:
  bool includes(const LangExpr& sub, const LangExpr& sup);

 private:
  struct Key {
    LangExpr sub, sup;
    bool operator==(const Key& o) const { return sub == o.sub && sup == o.sup; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.sub.hash() * 31 + k.sup.hash(); }
  };
  std::unordered_map<Key, bool, KeyHash> memo_;
};

/// Checks every installed behaviour against the capabilities held to it, over
/// every FIFO-consistent interleaving of its in-flight messages, and that the
/// behaviour has a case for every message its language still admits.
std::vector<Violation> global_invariant(const Config& c, InclusionCache* cache = nullptr);

/// A conservation mismatch for one target within one turn:
/// `held` is the post-turn combined tags shuffled with transferred tags,
/// `expected` is the pre-turn combined tags derived by the messages sent.
struct ConservationFailure {
  std::uint64_t step;
  ActorId actor;   // the actor whose turn it was
  ActorId target;
  std::string held, expected;
  bool included;  // held ⊆ expected still holds
};

/// Per-turn accounting of the capabilities one actor holds.
class TurnLedger {
 public:
  void begin(const Value* old_behaviour, const Value* payload);
  void created(const RefV& r);
  void sent(const RefV& via, MsgType msg, const LangExpr& residual, const Value& payload);
  void transferred(const Value& v);
  void split(const RefV& source, const RefV& first, const RefV& second);
  std::vector<ConservationFailure> verify(std::uint64_t step, ActorId actor,
                                          const Alphabet& alphabet) const;

 private:
  struct Held {
    ActorId target;
    LangExpr tag;
  };
  // Each capability in play this turn; a split one is replaced by its halves.
  struct Node {
    ActorId target;
    LangExpr birth;
    Word used;
    std::optional<std::pair<CapId, CapId>> halves;
  };
  void track(const RefV& r);
  void transfer_ref(const RefV& r);
  LangExpr baseline(CapId id) const;

  std::map<CapId, Node> nodes_;
  std::vector<CapId> roots_;
  std::map<CapId, Held> held_;
  std::vector<Held> transferred_;
  std::map<ActorId, Word> sent_;
};

struct MonitorOptions {
  bool strict = false;        // halt on the first violation
  bool conservation = true;   // run the per-turn ledger
};

class Monitor : public TurnObserver {
 public:
  Monitor(const Program& p, const TypedProgram* typed, MonitorOptions opts = {});

  /// Violations are appended here as trace events.
  void attach(Trace* trace) { trace_ = trace; }

  void turn_begin(const Config&, ActorId, const Value* old_behaviour, const Value* payload) override;
  void self_cap(ActorId, const RefV&) override;
  void spawned(ActorId, const RefV&, const Value& behaviour) override;
  void sent(ActorId, const RefV& via, MsgType, const LangExpr& residual, const Value& payload) override;
  void split(ActorId, const RefV& source, const RefV& first, const RefV& second) override;
  void turn_end(const Config&, ActorId, std::optional<NodeId> case_body,
                const LangExpr& observed) override;
  bool halt_requested() const override { return halt_; }

  const std::vector<Violation>& violations() const { return violations_; }
  const std::vector<ConservationFailure>& conservation_failures() const { return conservation_; }
  std::size_t turns_audited() const { return turns_audited_; }

 private:
  void report(Violation v);

  const Program* program_;
  const TypedProgram* typed_;
  MonitorOptions opts_;
  Trace* trace_ = nullptr;
  std::shared_ptr<InclusionCache> cache_;
  std::set<std::tuple<int, ActorId, std::string>> reported_;
  std::vector<Violation> violations_;
  std::vector<ConservationFailure> conservation_;
  TurnLedger ledger_;
  std::uint64_t step_ = 0;
  std::size_t turns_audited_ = 0;
  bool halt_ = false;
};

}  // namespace actorcap
