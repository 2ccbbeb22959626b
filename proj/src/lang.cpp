#include "actorcap/lang.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace actorcap {

// -- alphabet -----------------------------------------------------------------

Alphabet::Alphabet() { intern("Unit"); }

MsgType Alphabet::intern(std::string_view name) {
  if (auto it = index_.find(name); it != index_.end())
    return MsgType{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  return MsgType{id};
}

std::optional<MsgType> Alphabet::find(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end())
    return MsgType{it->second};
  return std::nullopt;
}

const std::string& Alphabet::name(MsgType m) const { return names_.at(m.id); }

std::vector<MsgType> Alphabet::symbols() const {
  std::vector<MsgType> out;
  out.reserve(names_.size());
  for (std::uint32_t i = 0; i < names_.size(); ++i)
    out.push_back(MsgType{i});
  return out;
}

// -- nodes --------------------------------------------------------------------

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

LangExpr LangExpr::make(LangKind kind, std::vector<LangExpr> kids, MsgType sym) {
  bool nul = false;
  switch (kind) {
    case LangKind::Empty:
    case LangKind::Sym:
      nul = false;
      break;
    case LangKind::Eps:
    case LangKind::Star:
      nul = true;
      break;
    case LangKind::Alt:
      nul = std::any_of(kids.begin(), kids.end(), [](const LangExpr& k) { return k.nullable(); });
      break;
    case LangKind::Cat:
    case LangKind::Shuffle:
    case LangKind::And:
      nul = std::all_of(kids.begin(), kids.end(), [](const LangExpr& k) { return k.nullable(); });
      break;
  }
  std::size_t h = mix(static_cast<std::size_t>(kind) * 1315423911u, sym.id);
  for (const auto& k : kids)
    h = mix(h, k.hash());
  return LangExpr(std::make_shared<const Node>(Node{kind, sym, nul, h, std::move(kids)}));
}

LangExpr::LangExpr() : LangExpr(empty_lang()) {}

bool operator==(const LangExpr& a, const LangExpr& b) {
  if (a.node_ == b.node_)
    return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.symbol() != b.symbol())
    return false;
  auto ak = a.children();
  auto bk = b.children();
  return std::equal(ak.begin(), ak.end(), bk.begin(), bk.end());
}

std::strong_ordering operator<=>(const LangExpr& a, const LangExpr& b) {
  if (a.node_ == b.node_)
    return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0)
    return c;
  if (auto c = a.symbol() <=> b.symbol(); c != 0)
    return c;
  auto ak = a.children();
  auto bk = b.children();
  if (auto c = ak.size() <=> bk.size(); c != 0)
    return c;
  for (std::size_t i = 0; i < ak.size(); ++i)
    if (auto c = ak[i] <=> bk[i]; c != 0)
      return c;
  return std::strong_ordering::equal;
}

LangExpr empty_lang() {
  static const LangExpr e = LangExpr::make(LangKind::Empty, {});
  return e;
}

LangExpr eps() {
  static const LangExpr e = LangExpr::make(LangKind::Eps, {});
  return e;
}

LangExpr sym(MsgType m) { return LangExpr::make(LangKind::Sym, {}, m); }

namespace raw {
LangExpr cat(LangExpr a, LangExpr b) { return LangExpr::make(LangKind::Cat, {std::move(a), std::move(b)}); }
LangExpr alt(LangExpr a, LangExpr b) { return LangExpr::make(LangKind::Alt, {std::move(a), std::move(b)}); }
LangExpr star(LangExpr a) { return LangExpr::make(LangKind::Star, {std::move(a)}); }
LangExpr shuffle(LangExpr a, LangExpr b) {
  return LangExpr::make(LangKind::Shuffle, {std::move(a), std::move(b)});
}
LangExpr intersect(LangExpr a, LangExpr b) {
  return LangExpr::make(LangKind::And, {std::move(a), std::move(b)});
}
}  // namespace raw

// -- normalizing constructors -------------------------------------------------

namespace {

void flatten_into(LangKind kind, const LangExpr& l, std::vector<LangExpr>& out) {
  if (l.kind() == kind) {
    for (const auto& k : l.children())
      flatten_into(kind, k, out);
  } else {
    out.push_back(l);
  }
}

}  // namespace

LangExpr cat(const LangExpr& a, const LangExpr& b) {
  if (a.is(LangKind::Empty) || b.is(LangKind::Empty))
    return empty_lang();
  if (a.is(LangKind::Eps))
    return b;
  if (b.is(LangKind::Eps))
    return a;
  if (a.is(LangKind::Cat)) {
    auto kids = a.children();
    return cat(kids[0], cat(kids[1], b));
  }
  return LangExpr::make(LangKind::Cat, {a, b});
}

LangExpr alt(std::vector<LangExpr> parts) {
  std::vector<LangExpr> flat;
  for (const auto& p : parts)
    flatten_into(LangKind::Alt, p, flat);
  std::erase_if(flat, [](const LangExpr& l) { return l.is(LangKind::Empty); });
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  // eps is subsumed by any nullable alternative
  if (flat.size() > 1 && flat.front().is(LangKind::Eps)) {
    bool other_nullable = std::any_of(flat.begin() + 1, flat.end(),
                                      [](const LangExpr& l) { return l.nullable(); });
    if (other_nullable)
      flat.erase(flat.begin());
  }
  if (flat.empty())
    return empty_lang();
  if (flat.size() == 1)
    return flat.front();
  return LangExpr::make(LangKind::Alt, std::move(flat));
}

LangExpr alt(const LangExpr& a, const LangExpr& b) { return alt(std::vector<LangExpr>{a, b}); }

LangExpr star(const LangExpr& a) {
  if (a.is(LangKind::Empty) || a.is(LangKind::Eps))
    return eps();
  if (a.is(LangKind::Star))
    return a;
  return LangExpr::make(LangKind::Star, {a});
}

LangExpr shuffle(std::vector<LangExpr> parts) {
  std::vector<LangExpr> flat;
  for (const auto& p : parts)
    flatten_into(LangKind::Shuffle, p, flat);
  for (const auto& l : flat)
    if (l.is(LangKind::Empty))
      return empty_lang();
  std::erase_if(flat, [](const LangExpr& l) { return l.is(LangKind::Eps); });
  std::sort(flat.begin(), flat.end());
  if (flat.empty())
    return eps();
  if (flat.size() == 1)
    return flat.front();
  return LangExpr::make(LangKind::Shuffle, std::move(flat));
}

LangExpr shuffle(const LangExpr& a, const LangExpr& b) { return shuffle(std::vector<LangExpr>{a, b}); }

LangExpr intersect(std::vector<LangExpr> parts) {
  std::vector<LangExpr> flat;
  for (const auto& p : parts)
    flatten_into(LangKind::And, p, flat);
  for (const auto& l : flat)
    if (l.is(LangKind::Empty))
      return empty_lang();
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.size() > 1 && flat.front().is(LangKind::Eps)) {
    bool all_nullable = std::all_of(flat.begin(), flat.end(),
                                    [](const LangExpr& l) { return l.nullable(); });
    return all_nullable ? eps() : empty_lang();
  }
  if (flat.size() == 1)
    return flat.front();
  return LangExpr::make(LangKind::And, std::move(flat));
}

LangExpr intersect(const LangExpr& a, const LangExpr& b) {
  return intersect(std::vector<LangExpr>{a, b});
}

LangExpr normalize(const LangExpr& l) {
  auto kids = l.children();
  switch (l.kind()) {
    case LangKind::Empty:
    case LangKind::Eps:
    case LangKind::Sym:
      return l;
    case LangKind::Star:
      return star(normalize(kids[0]));
    case LangKind::Cat: {
      // right fold so nested chains come out right-associated
      LangExpr acc = normalize(kids.back());
      for (std::size_t i = kids.size() - 1; i-- > 0;)
        acc = cat(normalize(kids[i]), acc);
      return acc;
    }
    case LangKind::Alt:
    case LangKind::Shuffle:
    case LangKind::And: {
      std::vector<LangExpr> parts;
      parts.reserve(kids.size());
      for (const auto& k : kids)
        parts.push_back(normalize(k));
      if (l.kind() == LangKind::Alt)
        return alt(std::move(parts));
      if (l.kind() == LangKind::Shuffle)
        return shuffle(std::move(parts));
      return intersect(std::move(parts));
    }
  }
  return l;
}

std::set<MsgType> symbols_of(const LangExpr& l) {
  std::set<MsgType> out;
  std::vector<LangExpr> stack{l};
  while (!stack.empty()) {
    LangExpr cur = std::move(stack.back());
    stack.pop_back();
    if (cur.is(LangKind::Sym))
      out.insert(cur.symbol());
    for (const auto& k : cur.children())
      stack.push_back(k);
  }
  return out;
}

StateBudgetExceeded::StateBudgetExceeded(std::size_t budget)
    : std::runtime_error("derivative closure exceeded state budget of " + std::to_string(budget)),
      budget_(budget) {}

std::size_t default_state_budget() {
  static const std::size_t budget = [] {
    if (const char* env = std::getenv("ACTORCAP_STATE_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0)
        return static_cast<std::size_t>(v);
    }
    return std::size_t{100000};
  }();
  return budget;
}

}  // namespace actorcap
