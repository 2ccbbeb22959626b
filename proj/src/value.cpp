#include "actorcap/value.hpp"

#include "actorcap/lang_text.hpp"

namespace actorcap {

Value make_pair_value(Value a, Value b) {
  return Value{PairV{std::make_shared<const Value>(std::move(a)),
                     std::make_shared<const Value>(std::move(b))}};
}

void for_each_ref(const Value& v, const std::function<void(const RefV&)>& fn) {
  auto bindings = [&](const std::shared_ptr<const Bindings>& b) {
    if (b)
      for (const auto& [name, inner] : *b)
        for_each_ref(inner, fn);
  };
  if (auto* r = v.as<RefV>()) {
    fn(*r);
  } else if (auto* p = v.as<PairV>()) {
    for_each_ref(*p->first, fn);
    for_each_ref(*p->second, fn);
  } else if (auto* c = v.as<ClosureV>()) {
    bindings(c->captured);
  } else if (auto* b = v.as<BehaviourV>()) {
    bindings(b->captured);
  }
}

std::string to_string(const Value& v, const Alphabet& alphabet) {
  if (auto* n = v.as<std::uint64_t>())
    return std::to_string(*n);
  if (auto* b = v.as<bool>())
    return *b ? "true" : "false";
  if (v.as<UnitV>())
    return "()";
  if (auto* p = v.as<PairV>())
    return "(" + to_string(*p->first, alphabet) + ", " + to_string(*p->second, alphabet) + ")";
  if (auto* c = v.as<ClosureV>())
    return "<fun " + c->fun->as<Fun>()->name + ">";
  if (auto* b = v.as<BehaviourV>())
    return "<beh " + to_string(b->annotation, alphabet) + ">";
  auto& r = *v.as<RefV>();
  return "<actor " + std::to_string(r.target) + " : " + to_string(r.tag, alphabet) + ">";
}

}  // namespace actorcap
