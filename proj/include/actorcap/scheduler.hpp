#pragma once

// Choosing deliveries: seeded random runs, bounded exhaustive exploration and
// replay of recorded schedules.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "actorcap/monitor.hpp"

namespace actorcap {

struct Outcome {
  enum class Kind { Quiescent, Stuck, Budget, DepthBound, Halted };
  Kind kind = Kind::Quiescent;
  StuckKind stuck = StuckKind::UnhandledMessage;  // meaningful for Stuck
  std::string detail;

  /// "quiescent", "stuck:<kind>", "budget", "depth-bound" or "violation".
  std::string label() const;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t max_deliveries = 1000;
  bool monitor = true;
  bool strict = false;
  RuntimeLimits limits;
};

struct RunResult {
  Trace trace;
  Outcome outcome;
  std::vector<Violation> violations;
  std::vector<ConservationFailure> conservation;
  Config final_config;
};

/// `typed` may be null to run without the checker's information.
RunResult run(const Program& p, const TypedProgram* typed, const RunOptions& opts = {});

/// Re-executes the given deliveries in order; stops early if one is not enabled.
RunResult replay(const Program& p, const TypedProgram* typed, const std::vector<Endpoint>& schedule,
                 const RunOptions& opts = {});

class ScheduleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExploreOptions {
  std::size_t max_depth = 8;
  std::size_t max_schedules = 1'000'000;
  bool monitor = true;
  RuntimeLimits limits;
};

struct OutcomeClass {
  std::size_t count = 0;  // schedules ending this way
  Trace witness;
};

struct ExplorationReport {
  std::size_t schedules = 0;
  std::map<std::string, OutcomeClass> outcomes;    // by Outcome::label
  std::map<std::string, OutcomeClass> violations;  // by violation kind; count = schedules raising it
  std::size_t conservation_turns = 0;     // audited turns, summed over schedules
  std::size_t conservation_failures = 0;  // schedules with an equality mismatch
  std::size_t conservation_inclusion_failures = 0;  // ... where even held ⊆ expected fails
  std::vector<ConservationFailure> conservation_examples;  // first few
  // Schedules stuck on an unhandled message with no earlier SendNotPermitted or
  // GlobalInvariantBroken on the same trace.
  std::size_t unflagged_stuck = 0;

  std::size_t stuck_schedules() const;
};

ExplorationReport explore(const Program& p, const TypedProgram* typed, const ExploreOptions& opts = {});

/// Explores from an already-initialized configuration.
ExplorationReport explore(const Config& start, const ExploreOptions& opts = {});

/// One JSON object per line, ending with the outcome line.
std::string trace_to_jsonl(const Trace& t, const Outcome& outcome, const Alphabet& alphabet);

}  // namespace actorcap
