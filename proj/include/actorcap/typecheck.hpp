#pragma once

// Flow-sensitive type-and-effect checking. Every judgment takes an input
// environment and returns the type, the output environment and the effect
// (the self-capabilities the expression may create).

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actorcap/syntax.hpp"

namespace actorcap {

enum class ErrorCode {
  UnboundVariable,
  TypeMismatch,
  SplitNotJustified,
  EmptyResidual,
  NonSplittableCapture,
  BehaviourConformance,
  DuplicateCaseLabel,
  SpawnCapabilityTooLarge,
  RootMissingUnitCase,
  JoinFailure,
};

const char* to_string(ErrorCode code);

class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorCode code, SourceLoc loc, std::string detail,
            std::optional<std::string> required = {}, std::optional<std::string> declared = {});

  ErrorCode code() const { return code_; }
  SourceLoc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }
  // The failing inclusion `required ⊆ declared`, pretty-printed, when there is one.
  const std::optional<std::string>& required_language() const { return required_; }
  const std::optional<std::string>& declared_language() const { return declared_; }

 private:
  ErrorCode code_;
  SourceLoc loc_;
  std::string detail_;
  std::optional<std::string> required_;
  std::optional<std::string> declared_;
};

using TypeEnv = std::map<std::string, TypePtr>;
using Effect = LangExpr;

struct Judgment {
  TypePtr type;
  TypeEnv env;
  Effect effect;
};

struct Warning {
  SourceLoc loc;
  std::string message;
};

struct NodeInfo {
  TypePtr type;
  TypeEnv env;
  Effect effect;
  bool consumes = false;  // Var: the read moves a non-duplicable value
};

struct TypedProgram {
  const Program* program = nullptr;
  std::vector<std::optional<NodeInfo>> nodes;  // by NodeId; unreached nodes stay empty
  std::map<NodeId, Effect> case_effects;       // by case body NodeId
  LangExpr root_lang;
  Effect root_effect;
  std::vector<Warning> warnings;

  const NodeInfo* info(NodeId id) const {
    return id < nodes.size() && nodes[id] ? &*nodes[id] : nullptr;
  }
};

struct CheckOptions {
  bool warn_dropped = false;  // report non-nullable capabilities discarded at scope exit
};

/// The returned TypedProgram points at `p`, which must outlive it.
TypedProgram check_program(const Program& p, const CheckOptions& opts = {});

Judgment check_expr(const Program& p, const TypeEnv& env, const Expr& e);

bool self_splittable(const Type& t);

/// Structural type equality with languages compared up to equivalence.
bool type_equiv(const Type& a, const Type& b);

/// Checks `source ≺ first ⧺ second`; throws SplitNotJustified or TypeMismatch.
void check_split(const Type& source, const Type& first, const Type& second,
                 const Alphabet& alphabet, SourceLoc loc);

struct SendResult {
  LangExpr residual;
  TypeEnv env;
};
SendResult apply_send_path(const TypeEnv& env, const Path& p, MsgType msg, const Alphabet& alphabet);

TypeEnv env_join(const TypeEnv& t, const TypeEnv& f, const Alphabet& alphabet, SourceLoc loc);

std::string render(const TypeError& e);  // `code @ line:col — detail`

}  // namespace actorcap
