#ifndef PACKING_CONSTRUCT_HPP
#define PACKING_CONSTRUCT_HPP

#include <optional>
#include <string>
#include <vector>

#include "packing/count.hpp"

namespace packing {

/// A built word together with the pattern set it is meant to pack and the
/// exact number of occurrences its recipe predicts.
struct Construction {
  Word word;
  std::string recipe;
  WeightedPatternSet target;
  BigInt predicted_count;
  /// predicted_count over C(n - m + b, b).
  Rational predicted_density;
};

/// Splits n into parts following the proportions: the r-th partial sum is
/// the ceiling of n times the r-th partial proportion. Proportions must be
/// nonnegative and sum to 1.
std::vector<int> apportion(const std::vector<Rational>& proportions, int n);
/// Same with floating proportions (partial sums are clamped to [0, n]).
std::vector<int> apportion(const std::vector<double>& proportions, int n);

/// Block sizes of the balanced monotone word: |n_i - n/k| < 1 and every
/// partial sum within 1 of r n / k.
std::vector<int> balanced_sizes(int n, int k);

/// 1^{n_1} 2^{n_2} ... k^{n_k} with balanced block sizes (1 <= k <= n).
Word balanced_monotone_word(int n, int k);

/// The balanced word with a predicted count for `target`, which must be
/// 11-2 or a classical increasing pattern.
Construction balanced_construction(int n, int k, const Pattern& target);

/// 1^a 2^c 1^b with (a, c, b) proportional to (p, r, q); target 1^p 2^r 1^q.
Construction pqr_word(int p, int q, int r, int n);

/// 1^{a_1} 2^{a_2} ... d^{a_d} (d+1)^c d^{b_d} ... 1^{b_1} with level i
/// sizes p alpha (1 - s alpha)^{i-1} and q alpha (1 - s alpha)^{i-1}
/// (s = p + q); the remaining mass (1 - s alpha)^d forms the middle block.
/// Target 1^p 2^r 1^q.
Construction nested_word(int p, int q, int depth, int n, int r = 1);

/// Layers of the given proportions, each filled strictly decreasing or
/// constant, on increasing value ranges. When `target_shape` is given the
/// target is the layered pattern of that shape whose layers have
/// `target_kinds` (all decreasing when omitted).
Construction layered_word(const std::vector<Rational>& proportions, const std::vector<LayerKind>& kinds, int n,
                          const std::optional<LayeredShape>& target_shape = std::nullopt,
                          const std::vector<LayerKind>& target_kinds = {});

/// (12...l)^{m-1} 1, of length l(m-1)+1 (m >= l >= 1).
Word superpattern_word(int l, int m);

/// (12)^d 1^{n-2d}; target 12-1 with d(d-1)/2 + d(n-2d) occurrences.
Construction twelve_one_word(int n, int d);

/// Least d in [1, n/2] maximizing d(d-1)/2 + d(n-2d).
int best_twelve_one_d(int n);

/// Layered permutation with round(sqrt n) balanced decreasing layers;
/// target 21-3.
Construction sqrt_layer_perm(int n);

/// Recount of the target on the built word.
BigInt recount(const Construction& c);

}  // namespace packing

#endif  // PACKING_CONSTRUCT_HPP
