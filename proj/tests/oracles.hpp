#ifndef PACKING_TESTS_ORACLES_HPP
#define PACKING_TESTS_ORACLES_HPP

// Brute-force reference implementations used only by the tests. They share
// nothing with the library code paths they check beyond `flatten`, which is
// the definition of order-isomorphism.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "packing/core.hpp"

namespace packing::oracle {

/// Calls `visit` with the start position of every block, for every way of
/// placing blocks of the given lengths left to right without overlap.
inline void for_each_placement(const std::vector<int>& block_lengths, int n,
                               const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> starts(block_lengths.size());
  std::function<void(std::size_t, int)> rec = [&](std::size_t b, int from) {
    if (b == block_lengths.size()) {
      visit(starts);
      return;
    }
    int rest = 0;
    for (std::size_t c = b; c < block_lengths.size(); ++c) rest += block_lengths[c];
    for (int s = from; s + rest <= n; ++s) {
      starts[b] = s;
      rec(b + 1, s + block_lengths[b]);
    }
  };
  rec(0, 0);
}

inline std::vector<int> gather(const std::vector<int>& word, const std::vector<int>& block_lengths,
                               const std::vector<int>& starts) {
  std::vector<int> picked;
  for (std::size_t b = 0; b < starts.size(); ++b) {
    for (int i = 0; i < block_lengths[b]; ++i) picked.push_back(word[starts[b] + i]);
  }
  return picked;
}

/// Occurrence count by enumerating every block placement.
inline std::uint64_t naive_count(const Pattern& p, const std::vector<int>& word) {
  if (p.size() > word.size()) return 0;
  std::uint64_t total = 0;
  const auto lengths = p.block_lengths();
  for_each_placement(lengths, static_cast<int>(word.size()), [&](const std::vector<int>& starts) {
    if (flatten(gather(word, lengths, starts)) == p.letters()) ++total;
  });
  return total;
}

/// All words over {1..k} of length n, in lexicographic order.
inline std::vector<std::vector<int>> all_words(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> w(n, 1);
  while (true) {
    out.push_back(w);
    int i = n - 1;
    while (i >= 0 && w[i] == k) w[i--] = 1;
    if (i < 0) break;
    ++w[i];
  }
  return out;
}

/// Words whose distinct letters are exactly {1..d}, filtered from all_words.
inline std::vector<std::vector<int>> canonical_words_brute(int n, int k) {
  std::vector<std::vector<int>> out;
  if (n == 0) return {{}};
  for (auto& w : all_words(n, std::min(n, k))) {
    if (flatten(w) == w) out.push_back(w);
  }
  return out;
}

}  // namespace packing::oracle

#endif  // PACKING_TESTS_ORACLES_HPP
