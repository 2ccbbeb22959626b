#pragma once

#include <random>
#include <vector>

#include "actorcap/lang.hpp"

namespace actorcap::testing {

// Random language expressions over a fixed small alphabet. Raw constructors
// are used so the normalizer sees unnormalized shapes too.
class LangGen {
 public:
  LangGen(std::uint64_t seed, std::vector<MsgType> symbols)
      : rng_(seed), symbols_(std::move(symbols)) {}

  LangExpr expr(int depth) {
    int pick = pick_int(0, depth <= 0 ? 2 : 9);
    switch (pick) {
      case 0: return pick_int(0, 5) == 0 ? empty_lang() : eps();
      case 1:
      case 2: return sym(symbols_[pick_int(0, int(symbols_.size()) - 1)]);
      case 3:
      case 4: return raw::cat(expr(depth - 1), expr(depth - 1));
      case 5: return raw::alt(expr(depth - 1), expr(depth - 1));
      case 6: return raw::star(expr(depth - 1));
      case 7:
      case 8: return raw::shuffle(expr(depth - 1), expr(depth - 1));
      default: return raw::intersect(expr(depth - 1), expr(depth - 1));
    }
  }

  Word word(std::size_t max_len) {
    Word w(pick_int(0, int(max_len)));
    for (auto& m : w)
      m = symbols_[pick_int(0, int(symbols_.size()) - 1)];
    return w;
  }

  std::vector<LangExpr> population(std::size_t n, int depth) {
    std::vector<LangExpr> out;
    out.reserve(n);
    while (out.size() < n)
      out.push_back(expr(depth));
    return out;
  }

 private:
  int pick_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64 rng_;
  std::vector<MsgType> symbols_;
};

// Every word over `symbols` of length at most `max_len`.
inline std::vector<Word> all_words(const std::vector<MsgType>& symbols, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (MsgType s : symbols) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace actorcap::testing
