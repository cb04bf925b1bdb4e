#ifndef PACKING_SEARCH_HPP
#define PACKING_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "packing/count.hpp"

namespace packing {

/// Search budget. Zero means unlimited. Nodes are the primary unit; the
/// wall-clock cap only exists as a safety net.
struct Budget {
  std::uint64_t max_nodes = 0;
  double max_seconds = 0;
};

struct SearchOptions {
  Budget budget;
  unsigned threads = 1;
};

struct SearchResult {
  WeightedPatternSet patterns;
  int k = 0;
  int n = 0;
  /// Weighted maximum; an integer whenever all weights are.
  Rational mu;
  Rational delta;
  /// Lexicographically least canonical word attaining mu (best found when
  /// the search was cut short).
  Word witness;
  std::uint64_t nodes_explored = 0;
  bool exhaustive = false;
};

/// Calls `visit` for every canonical word of length n (distinct letters are
/// exactly {1..d}, d <= min(n, k)) in lexicographic order.
void for_each_canonical(int n, int k, const std::function<void(const std::vector<int>&)>& visit);
std::vector<Word> enumerate_canonical(int n, int k);

/// Exact mu(P, k, n) by depth-first branch and bound over canonical words.
/// A prefix is dropped when its count plus the weight of every placement
/// that is not yet complete cannot beat the best word seen.
SearchResult max_count(const WeightedPatternSet& ps, int k, int n, const SearchOptions& options = {});

/// max_count with delta = mu / C(n - m + b, b).
SearchResult delta_exact(const WeightedPatternSet& ps, int k, int n, const SearchOptions& options = {});

enum class KPolicy { Diagonal, Fixed };

struct MonotonicityViolation {
  int n = 0;
  int k = 0;
  /// "n" for delta(k,n) > delta(k,n-1), "k" for delta(k,n) < delta(k-1,n).
  std::string kind;
  Rational value;
  Rational neighbour;
};

struct SeriesReport {
  std::vector<SearchResult> rows;
  std::vector<MonotonicityViolation> violations;
  /// False when any value needed by the audit came from a truncated search.
  bool audit_complete = true;
  /// Smallest delta seen so far along the series (never extrapolated).
  Rational infimum_so_far;
};

/// delta(P, k, n) for n in [n_lo, n_hi] with k = n (Diagonal) or k = fixed_k.
/// Every row is audited against delta(k, n-1) (when n > m) and delta(k-1, n).
SeriesReport delta_series(const WeightedPatternSet& ps, int n_lo, int n_hi, KPolicy policy, int fixed_k,
                          const SearchOptions& options = {});

struct RestrictionReport {
  Rational words_max;
  Word words_witness;
  Rational permutations_max;
  Word permutation_witness;
  bool equal = false;
  bool exhaustive = false;
};

/// Compares the maximum over all canonical words of length n with the
/// maximum over permutations of length n. Patterns must be permutations
/// (any hyphenation).
RestrictionReport verify_perm_restriction(const WeightedPatternSet& ps, int n, const SearchOptions& options = {});

struct LayeredWitnessReport {
  Rational max;
  std::size_t maximizers = 0;
  std::size_t layered_maximizers = 0;
  std::optional<Word> layered_witness;
  /// Every layer of every pattern has length > 1, so every maximizer must
  /// itself be layered.
  bool strict_condition = false;
  bool holds = false;
};

/// Exhausts S_n and checks that a layered permutation attains the maximum,
/// and that every maximizer is layered when the strict condition applies.
/// Patterns must be classical layered permutations.
LayeredWitnessReport verify_layered_witness(const WeightedPatternSet& ps, int n);

}  // namespace packing

#endif  // PACKING_SEARCH_HPP
