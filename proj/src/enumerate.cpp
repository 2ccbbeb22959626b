#include "actorcap/lang.hpp"

#include <algorithm>
#include <iterator>

namespace actorcap {

namespace {

using WordSet = std::set<Word>;

void interleave(const Word& x, std::size_t i, const Word& y, std::size_t j, Word& prefix,
                WordSet& out) {
  if (i == x.size() && j == y.size()) {
    out.insert(prefix);
    return;
  }
  if (i < x.size()) {
    prefix.push_back(x[i]);
    interleave(x, i + 1, y, j, prefix, out);
    prefix.pop_back();
  }
  if (j < y.size()) {
    prefix.push_back(y[j]);
    interleave(x, i, y, j + 1, prefix, out);
    prefix.pop_back();
  }
}

WordSet concat_sets(const WordSet& a, const WordSet& b, std::size_t max_len) {
  WordSet out;
  for (const auto& x : a)
    for (const auto& y : b) {
      if (x.size() + y.size() > max_len)
        continue;
      Word w = x;
      w.insert(w.end(), y.begin(), y.end());
      out.insert(std::move(w));
    }
  return out;
}

WordSet shuffle_sets(const WordSet& a, const WordSet& b, std::size_t max_len) {
  WordSet out;
  Word prefix;
  for (const auto& x : a)
    for (const auto& y : b)
      if (x.size() + y.size() <= max_len)
        interleave(x, 0, y, 0, prefix, out);
  return out;
}

WordSet denote(const LangExpr& l, std::size_t max_len) {
  auto kids = l.children();
  switch (l.kind()) {
    case LangKind::Empty:
      return {};
    case LangKind::Eps:
      return {Word{}};
    case LangKind::Sym:
      if (max_len == 0)
        return {};
      return {Word{l.symbol()}};
    case LangKind::Cat: {
      WordSet acc = denote(kids[0], max_len);
      for (std::size_t i = 1; i < kids.size(); ++i)
        acc = concat_sets(acc, denote(kids[i], max_len), max_len);
      return acc;
    }
    case LangKind::Alt: {
      WordSet acc;
      for (const auto& k : kids) {
        WordSet part = denote(k, max_len);
        acc.insert(part.begin(), part.end());
      }
      return acc;
    }
    case LangKind::Shuffle: {
      WordSet acc = denote(kids[0], max_len);
      for (std::size_t i = 1; i < kids.size(); ++i)
        acc = shuffle_sets(acc, denote(kids[i], max_len), max_len);
      return acc;
    }
    case LangKind::And: {
      WordSet acc = denote(kids[0], max_len);
      for (std::size_t i = 1; i < kids.size(); ++i) {
        WordSet part = denote(kids[i], max_len);
        WordSet keep;
        std::set_intersection(acc.begin(), acc.end(), part.begin(), part.end(),
                              std::inserter(keep, keep.end()));
        acc = std::move(keep);
      }
      return acc;
    }
    case LangKind::Star: {
      WordSet body = denote(kids[0], max_len);
      body.erase(Word{});
      WordSet acc{Word{}};
      WordSet frontier = acc;
      while (!frontier.empty()) {
        WordSet next;
        for (const auto& w : concat_sets(frontier, body, max_len))
          if (!acc.contains(w))
            next.insert(w);
        acc.insert(next.begin(), next.end());
        frontier = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

std::set<Word> enumerate(const LangExpr& l, std::size_t max_len) { return denote(l, max_len); }

}  // namespace actorcap
