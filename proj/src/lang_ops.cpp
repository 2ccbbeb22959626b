#include "actorcap/lang.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace actorcap {

bool nullable(const LangExpr& l) { return l.nullable(); }

namespace {

// Derivative of an already-normalized expression; the result is normalized.
LangExpr deriv(MsgType s, const LangExpr& l) {
  auto kids = l.children();
  switch (l.kind()) {
    case LangKind::Empty:
    case LangKind::Eps:
      return empty_lang();
    case LangKind::Sym:
      return l.symbol() == s ? eps() : empty_lang();
    case LangKind::Cat: {
      LangExpr head = cat(deriv(s, kids[0]), kids[1]);
      if (!kids[0].nullable())
        return head;
      return alt(head, deriv(s, kids[1]));
    }
    case LangKind::Alt: {
      std::vector<LangExpr> parts;
      parts.reserve(kids.size());
      for (const auto& k : kids)
        parts.push_back(deriv(s, k));
      return alt(std::move(parts));
    }
    case LangKind::Star:
      return cat(deriv(s, kids[0]), l);
    case LangKind::Shuffle: {
      // d(A1 # ... # An) = sum_i A1 # ... # d(Ai) # ... # An
      std::vector<LangExpr> base(kids.begin(), kids.end());
      std::vector<LangExpr> terms;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        LangExpr d = deriv(s, kids[i]);
        if (d.is(LangKind::Empty))
          continue;
        auto parts = base;
        parts[i] = std::move(d);
        terms.push_back(shuffle(std::move(parts)));
      }
      return alt(std::move(terms));
    }
    case LangKind::And: {
      std::vector<LangExpr> parts;
      parts.reserve(kids.size());
      for (const auto& k : kids) {
        LangExpr d = deriv(s, k);
        if (d.is(LangKind::Empty))
          return empty_lang();
        parts.push_back(std::move(d));
      }
      return intersect(std::move(parts));
    }
  }
  return empty_lang();
}

}  // namespace

LangExpr derivative(MsgType s, const LangExpr& l) { return deriv(s, normalize(l)); }

LangExpr word_derivative(std::span<const MsgType> w, const LangExpr& l) {
  LangExpr cur = normalize(l);
  for (MsgType s : w) {
    if (cur.is(LangKind::Empty))
      break;
    cur = deriv(s, cur);
  }
  return cur;
}

bool member(std::span<const MsgType> w, const LangExpr& l) { return word_derivative(w, l).nullable(); }

namespace {

/// Per-call memo of derivatives; keeps each decision procedure free of
/// shared mutable state.
class DerivativeCache {
 public:
  const LangExpr& get(MsgType s, const LangExpr& l) {
    auto [it, inserted] = table_.try_emplace(Key{s, l});
    if (inserted)
      it->second = deriv(s, l);
    return it->second;
  }

 private:
  struct Key {
    MsgType s;
    LangExpr l;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.l.hash() * 31 + k.s.id; }
  };
  std::unordered_map<Key, LangExpr, KeyHash> table_;
};

struct PairHash {
  std::size_t operator()(const std::pair<LangExpr, LangExpr>& p) const {
    return p.first.hash() * 1000003u ^ p.second.hash();
  }
};

}  // namespace

bool is_empty(const LangExpr& l, std::size_t state_budget) {
  LangExpr start = normalize(l);
  if (start.is(LangKind::Empty))
    return true;
  auto alphabet = symbols_of(start);
  DerivativeCache cache;
  std::unordered_set<LangExpr> seen{start};
  std::deque<LangExpr> work{start};
  while (!work.empty()) {
    LangExpr cur = std::move(work.front());
    work.pop_front();
    if (cur.nullable())
      return false;
    for (MsgType s : alphabet) {
      const LangExpr& d = cache.get(s, cur);
      if (d.is(LangKind::Empty) || !seen.insert(d).second)
        continue;
      if (seen.size() > state_budget)
        throw StateBudgetExceeded(state_budget);
      work.push_back(d);
    }
  }
  return true;
}

bool includes(const LangExpr& sub, const LangExpr& sup, std::size_t state_budget) {
  LangExpr lhs = normalize(sub);
  LangExpr rhs = normalize(sup);
  // Only symbols that can occur in words of `lhs` matter.
  auto alphabet = symbols_of(lhs);
  DerivativeCache cache;
  using Pair = std::pair<LangExpr, LangExpr>;
  std::unordered_set<Pair, PairHash> seen{{lhs, rhs}};
  std::deque<Pair> work{{lhs, rhs}};
  while (!work.empty()) {
    auto [r, s] = std::move(work.front());
    work.pop_front();
    if (r.is(LangKind::Empty) || r == s)
      continue;
    if (r.nullable() && !s.nullable())
      return false;
    for (MsgType a : alphabet) {
      const LangExpr& dr = cache.get(a, r);
      if (dr.is(LangKind::Empty))
        continue;
      Pair next{dr, cache.get(a, s)};
      if (!seen.insert(next).second)
        continue;
      if (seen.size() > state_budget)
        throw StateBudgetExceeded(state_budget);
      work.push_back(std::move(next));
    }
  }
  return true;
}

bool equiv(const LangExpr& a, const LangExpr& b, std::size_t state_budget) {
  return includes(a, b, state_budget) && includes(b, a, state_budget);
}

}  // namespace actorcap
