#ifndef PACKING_COUNT_HPP
#define PACKING_COUNT_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "packing/core.hpp"
#include "packing/numeric.hpp"

namespace packing {

/// Patterns with nonnegative weights sharing one length and one block count,
/// so that all of them are normalised by the same denominator.
class WeightedPatternSet {
 public:
  struct Entry {
    Pattern pattern;
    Rational weight;
  };

  WeightedPatternSet() = default;
  /// Single pattern of weight 1.
  WeightedPatternSet(Pattern p);  // NOLINT(google-explicit-constructor)
  WeightedPatternSet(std::vector<Pattern> patterns);  // NOLINT(google-explicit-constructor)

  /// Throws std::invalid_argument on a negative weight or a length/block
  /// count that differs from the entries already present.
  void add(Pattern p, Rational weight = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t pattern_length() const { return m_; }
  int blocks() const { return b_; }

 private:
  std::vector<Entry> entries_;
  std::size_t m_ = 0;
  int b_ = 0;
};

/// Left-to-right dynamic program over word positions.
///
/// A state is a partial occurrence: how many pattern letters have been
/// matched, the word value assigned to each pattern value seen so far, and
/// whether the next pattern letter must be taken from the very next word
/// position (no hyphen in that gap). Equal states are merged with their
/// multiplicities added, so the table size depends on the pattern and the
/// alphabet, not on the number of partial occurrences.
template <class Key, class Count>
class BasicOccurrenceCounter {
 public:
  /// `max_letter` bounds every value later passed to push().
  BasicOccurrenceCounter(const Pattern& p, int max_letter);

  void push(int x);

  /// Occurrences completed by the letters pushed so far.
  const Count& count() const { return completed_; }
  std::size_t live_states() const { return states_.size(); }

  /// Whether a pattern of this length and alphabet fits the packed key.
  static bool fits(const Pattern& p, int max_letter);

 private:
  int field(Key key, int value) const;
  Key with_field(Key key, int value, int x) const;
  bool can_take(Key key, int value, int x) const;

  std::vector<int> pattern_;
  std::vector<bool> adjacent_after_;
  int distinct_ = 0;
  int width_ = 0;
  Key mask_ = 0;
  std::vector<std::pair<Key, Count>> states_;
  std::vector<std::pair<Key, Count>> scratch_;
  Count completed_{};
};

/// Fast counter for small words (packed 64-bit states, 64-bit counts).
using OccurrenceCounter = BasicOccurrenceCounter<std::uint64_t, std::uint64_t>;

extern template class BasicOccurrenceCounter<std::uint64_t, std::uint64_t>;
extern template class BasicOccurrenceCounter<unsigned __int128, BigInt>;

/// Occurrences of a classical pattern: index sets i_1 < ... < i_m whose
/// letters flatten to p. Returns 0 when m > n. Throws std::invalid_argument
/// if p carries adjacency constraints.
BigInt count_classical(const Pattern& p, const Word& w);

/// Occurrences of a pattern with arbitrary hyphens: letters within a block
/// sit at consecutive positions, and the selected letters flatten to p.
BigInt count_generalized(const Pattern& p, const Word& w);

/// Occurrences of p in w, honouring whatever hyphens p has.
BigInt count(const Pattern& p, const Word& w);

/// Sum over the set of weight * occurrences.
Rational weighted_count(const WeightedPatternSet& ps, const Word& w);

struct CountReport {
  Rational nu;
  BigInt denom;
  Rational d;
};

/// Weighted count over the common denominator C(n - m + b, b). Throws
/// std::invalid_argument for an empty set or when n < m.
CountReport density(const WeightedPatternSet& ps, const Word& w);

/// Tie-breaking map onto permutations: the j-th occurrence (from the left)
/// of letter i becomes n_1 + ... + n_i - j + 1, so equal letters turn into a
/// decreasing run.
Word tie_break_permutation(const Word& w);

}  // namespace packing

#endif  // PACKING_COUNT_HPP
