#pragma once

// Extended regular expressions over a finite alphabet of message types:
// concatenation, union, star, shuffle and intersection, with Brzozowski
// derivatives and a coinductive inclusion check.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorcap {

/// Interned message type; an alphabet symbol.
struct MsgType {
  std::uint32_t id = 0;
  friend constexpr auto operator<=>(MsgType, MsgType) = default;
};

using Word = std::vector<MsgType>;

/// Interning table for message names. Symbol 0 is always the built-in `Unit`.
class Alphabet {
 public:
  static constexpr MsgType unit{0};

  Alphabet();

  MsgType intern(std::string_view name);
  std::optional<MsgType> find(std::string_view name) const;
  const std::string& name(MsgType m) const;
  std::size_t size() const { return names_.size(); }
  std::vector<MsgType> symbols() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
};

enum class LangKind : std::uint8_t { Empty, Eps, Sym, Cat, Alt, Star, Shuffle, And };

/// Immutable language expression. Nodes are shared; copying is cheap.
///
/// Nodes built with the `raw::` constructors keep their exact shape (the
/// parser uses them). The free constructors `cat`, `alt`, `star`, `shuffle`
/// and `intersect` return normalized nodes: union and intersection are
/// flattened, sorted and deduplicated; shuffle is flattened and sorted;
/// concatenation is right-nested; units and annihilators are applied.
class LangExpr {
 public:
  LangExpr();  // the empty language

  LangKind kind() const { return node_->kind; }
  MsgType symbol() const { return node_->sym; }
  std::span<const LangExpr> children() const { return node_->kids; }
  bool nullable() const { return node_->nullable; }
  std::size_t hash() const { return node_->hash; }

  bool is(LangKind k) const { return kind() == k; }

  static LangExpr make(LangKind kind, std::vector<LangExpr> kids, MsgType sym = {});

  friend bool operator==(const LangExpr& a, const LangExpr& b);
  friend std::strong_ordering operator<=>(const LangExpr& a, const LangExpr& b);

 private:
  struct Node {
    LangKind kind;
    MsgType sym;
    bool nullable;
    std::size_t hash;
    std::vector<LangExpr> kids;
  };
  explicit LangExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

LangExpr empty_lang();
LangExpr eps();
LangExpr sym(MsgType m);

namespace raw {
LangExpr cat(LangExpr a, LangExpr b);
LangExpr alt(LangExpr a, LangExpr b);
LangExpr star(LangExpr a);
LangExpr shuffle(LangExpr a, LangExpr b);
LangExpr intersect(LangExpr a, LangExpr b);
}  // namespace raw

LangExpr cat(const LangExpr& a, const LangExpr& b);
LangExpr alt(const LangExpr& a, const LangExpr& b);
LangExpr alt(std::vector<LangExpr> parts);
LangExpr star(const LangExpr& a);
LangExpr shuffle(const LangExpr& a, const LangExpr& b);
LangExpr shuffle(std::vector<LangExpr> parts);
LangExpr intersect(const LangExpr& a, const LangExpr& b);
LangExpr intersect(std::vector<LangExpr> parts);

/// Canonical form; idempotent and denotation-preserving.
LangExpr normalize(const LangExpr& l);

/// Symbols mentioned anywhere in `l`.
std::set<MsgType> symbols_of(const LangExpr& l);

/// Thrown when a derivative closure grows past the configured state budget.
class StateBudgetExceeded : public std::runtime_error {
 public:
  explicit StateBudgetExceeded(std::size_t budget);
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

/// 10^5, or the value of ACTORCAP_STATE_BUDGET if set. Read once.
std::size_t default_state_budget();

bool nullable(const LangExpr& l);
LangExpr derivative(MsgType s, const LangExpr& l);
LangExpr word_derivative(std::span<const MsgType> w, const LangExpr& l);
bool member(std::span<const MsgType> w, const LangExpr& l);

bool is_empty(const LangExpr& l, std::size_t state_budget = default_state_budget());
bool includes(const LangExpr& sub, const LangExpr& sup,
              std::size_t state_budget = default_state_budget());
bool equiv(const LangExpr& a, const LangExpr& b,
           std::size_t state_budget = default_state_budget());

/// All words of length <= max_len in the denotation of `l`, computed by a
/// bounded set-semantics evaluator that never takes derivatives.
std::set<Word> enumerate(const LangExpr& l, std::size_t max_len);

}  // namespace actorcap

template <>
struct std::hash<actorcap::LangExpr> {
  std::size_t operator()(const actorcap::LangExpr& l) const noexcept { return l.hash(); }
};
