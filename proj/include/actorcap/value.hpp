#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>

#include "actorcap/syntax.hpp"

namespace actorcap {

using ActorId = std::uint32_t;
using CapId = std::uint64_t;

struct Value;
using Bindings = std::map<std::string, Value>;

struct UnitV {};
struct PairV {
  std::shared_ptr<const Value> first, second;
};
struct ClosureV {
  const Expr* fun;  // a Fun node
  std::shared_ptr<const Bindings> captured;
};
struct BehaviourV {
  LangExpr annotation;
  const Expr* beh;  // a Beh node
  std::shared_ptr<const Bindings> captured;
};
// `tag` and `cap` are monitor instrumentation and never steer evaluation.
struct RefV {
  ActorId target;
  LangExpr tag;
  CapId cap;
};

struct Value {
  std::variant<std::uint64_t, bool, UnitV, PairV, ClosureV, BehaviourV, RefV> v;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
  template <class T>
  T* as() {
    return std::get_if<T>(&v);
  }
};

Value make_pair_value(Value a, Value b);

/// Visits every actor reference reachable from `v`, including those captured
/// by closures and behaviours.
void for_each_ref(const Value& v, const std::function<void(const RefV&)>& fn);

std::string to_string(const Value& v, const Alphabet& alphabet);

}  // namespace actorcap
