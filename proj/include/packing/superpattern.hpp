#ifndef PACKING_SUPERPATTERN_HPP
#define PACKING_SUPERPATTERN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "packing/core.hpp"
#include "packing/search.hpp"

namespace packing {

/// Every canonical word of length m on at most l letters, in lexicographic
/// order. When m <= l the universe is the same as for l = m and `l` is
/// reduced accordingly.
struct Universe {
  int requested_l = 0;
  int l = 0;
  int m = 0;
  std::vector<Word> patterns;
};

Universe pattern_universe(int l, int m);

struct UniversalityReport {
  bool universal = false;
  std::vector<Word> missing;
};

/// Whether w contains (classically) every pattern of the (l, m) universe.
UniversalityReport is_universal(const Word& w, int l, int m);

struct LengthVerdict {
  int length = 0;
  /// "infeasible", "feasible" or "budget exhausted".
  std::string verdict;
  std::uint64_t nodes = 0;
};

struct SuperResult {
  int requested_l = 0;
  /// Alphabet limit the search ran under (0: none).
  int max_letters = 0;
  int l = 0;
  int m = 0;
  /// n(l, m) when certified, otherwise the best upper bound.
  int length = 0;
  Word witness;
  /// No shorter word is universal (every shorter length was exhausted).
  bool lower_bound_certified = false;
  /// Every length below this one was shown infeasible.
  int certified_lower_bound = 0;
  int upper_bound = 0;
  std::uint64_t nodes = 0;
  std::vector<LengthVerdict> log;
};

struct SuperSearchOptions {
  /// Largest number of distinct letters the word may use (0: no limit).
  int max_letters = 0;
  /// Explore the shards in reverse order, for an independent re-run of a
  /// certificate.
  bool reverse_shards = false;
};

/// Shortest common superpattern by iterative deepening from m + l - 1. Each
/// length is decided by a depth-first search over order types of words
/// (every prefix is kept flattened, so a node has 2d+1 children), pruned
/// when some missing pattern needs more letters than remain. The witness of
/// the first feasible length is the lexicographically least canonical one.
/// The starting upper bound is (12...l)^{m-1}1.
SuperResult shortest_superpattern(int l, int m, const SearchOptions& options = {},
                                  const SuperSearchOptions& variant = {});

/// Decides a single length: true/false, or nullopt on budget exhaustion.
/// `nodes` receives the number of prefixes and leaves examined; `witness`,
/// when given, receives the universal word found.
std::optional<bool> superpattern_exists(int l, int m, int length, const SearchOptions& options,
                                        std::uint64_t& nodes, Word* witness = nullptr,
                                        const SuperSearchOptions& variant = {});

}  // namespace packing

#endif  // PACKING_SUPERPATTERN_HPP
