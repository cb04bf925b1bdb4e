#include "packing/count.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace packing {

// ---------------------------------------------------------------------------
// WeightedPatternSet

WeightedPatternSet::WeightedPatternSet(Pattern p) { add(std::move(p)); }

WeightedPatternSet::WeightedPatternSet(std::vector<Pattern> patterns) {
  for (auto& p : patterns) add(std::move(p));
}

void WeightedPatternSet::add(Pattern p, Rational weight) {
  if (weight < 0) throw std::invalid_argument("pattern weights must be nonnegative");
  if (entries_.empty()) {
    m_ = p.size();
    b_ = p.blocks();
  } else if (p.size() != m_ || p.blocks() != b_) {
    throw std::invalid_argument("all patterns in a set must share length and block count");
  }
  entries_.push_back({std::move(p), std::move(weight)});
}

// ---------------------------------------------------------------------------
// Occurrence automaton

namespace {
constexpr int kStepBits = 4;
constexpr int kAdjacentBit = 4;
constexpr int kFieldOffset = 5;
}  // namespace

template <class Key, class Count>
bool BasicOccurrenceCounter<Key, Count>::fits(const Pattern& p, int max_letter) {
  const int width = std::bit_width(static_cast<unsigned>(std::max(max_letter, 1)));
  return p.size() < (1u << kStepBits) &&
         kFieldOffset + p.distinct() * width <= static_cast<int>(sizeof(Key) * 8);
}

template <class Key, class Count>
BasicOccurrenceCounter<Key, Count>::BasicOccurrenceCounter(const Pattern& p, int max_letter)
    : pattern_(p.letters()), distinct_(p.distinct()) {
  if (!fits(p, max_letter)) {
    throw std::length_error("pattern/alphabet too large for the packed counter state");
  }
  width_ = std::bit_width(static_cast<unsigned>(std::max(max_letter, 1)));
  mask_ = (Key{1} << width_) - 1;
  adjacent_after_.reserve(p.size());
  for (bool hyphen : p.hyphens()) adjacent_after_.push_back(!hyphen);
  adjacent_after_.push_back(false);
}

template <class Key, class Count>
int BasicOccurrenceCounter<Key, Count>::field(Key key, int value) const {
  return static_cast<int>((key >> (kFieldOffset + (value - 1) * width_)) & mask_);
}

template <class Key, class Count>
Key BasicOccurrenceCounter<Key, Count>::with_field(Key key, int value, int x) const {
  return key | (static_cast<Key>(x) << (kFieldOffset + (value - 1) * width_));
}

template <class Key, class Count>
bool BasicOccurrenceCounter<Key, Count>::can_take(Key key, int value, int x) const {
  if (int assigned = field(key, value); assigned != 0) return assigned == x;
  // Assigned values form a strictly increasing map, so the nearest assigned
  // neighbours on each side decide consistency.
  for (int u = value - 1; u >= 1; --u) {
    if (int below = field(key, u); below != 0) {
      if (below >= x) return false;
      break;
    }
  }
  for (int u = value + 1; u <= distinct_; ++u) {
    if (int above = field(key, u); above != 0) {
      if (above <= x) return false;
      break;
    }
  }
  return true;
}

template <class Key, class Count>
void BasicOccurrenceCounter<Key, Count>::push(int x) {
  const int m = static_cast<int>(pattern_.size());
  auto advance = [&](Key key, int step, const Count& c) {
    const int value = pattern_[step];
    if (!can_take(key, value, x)) return;
    if (step + 1 == m) {
      completed_ += c;
      return;
    }
    Key next = key & ~static_cast<Key>((Key{1} << kFieldOffset) - 1);
    if (field(key, value) == 0) next = with_field(next, value, x);
    next |= static_cast<Key>(step + 1);
    if (adjacent_after_[step]) next |= Key{1} << kAdjacentBit;
    scratch_.emplace_back(next, c);
  };

  scratch_.clear();
  for (const auto& [key, c] : states_) {
    const int step = static_cast<int>(key & ((Key{1} << kStepBits) - 1));
    const bool must_take = ((key >> kAdjacentBit) & 1) != 0;
    if (!must_take) scratch_.emplace_back(key, c);
    advance(key, step, c);
  }
  advance(Key{0}, 0, Count{1});

  std::sort(scratch_.begin(), scratch_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  states_.clear();
  for (auto& entry : scratch_) {
    if (!states_.empty() && states_.back().first == entry.first) states_.back().second += entry.second;
    else states_.push_back(std::move(entry));
  }
}

template class BasicOccurrenceCounter<std::uint64_t, std::uint64_t>;
template class BasicOccurrenceCounter<unsigned __int128, BigInt>;

// ---------------------------------------------------------------------------
// Counting API

BigInt count(const Pattern& p, const Word& w) {
  if (p.size() > w.size()) return 0;
  const Word flat = flatten(w);
  const int top = flat.distinct();
  const bool small_counts = placement_count(w.size(), p.size(), p.blocks()) <= BigInt(UINT64_MAX);
  if (small_counts && OccurrenceCounter::fits(p, top)) {
    OccurrenceCounter counter(p, top);
    for (int x : flat.letters()) counter.push(x);
    return counter.count();
  }
  BasicOccurrenceCounter<unsigned __int128, BigInt> counter(p, top);
  for (int x : flat.letters()) counter.push(x);
  return counter.count();
}

BigInt count_classical(const Pattern& p, const Word& w) {
  if (!p.is_classical()) throw std::invalid_argument("count_classical needs a classical pattern");
  return count(p, w);
}

BigInt count_generalized(const Pattern& p, const Word& w) { return count(p, w); }

Rational weighted_count(const WeightedPatternSet& ps, const Word& w) {
  Rational total = 0;
  for (const auto& [pattern, weight] : ps.entries()) {
    if (weight == 0) continue;
    total += weight * Rational(count(pattern, w));
  }
  return total;
}

CountReport density(const WeightedPatternSet& ps, const Word& w) {
  if (ps.empty()) throw std::invalid_argument("density of an empty pattern set is undefined");
  if (w.size() < ps.pattern_length()) {
    throw std::invalid_argument("word shorter than the patterns: density denominator is zero");
  }
  CountReport report;
  report.nu = weighted_count(ps, w);
  report.denom = placement_count(w.size(), ps.pattern_length(), ps.blocks());
  report.d = report.nu / Rational(report.denom);
  return report;
}

Word tie_break_permutation(const Word& w) {
  const auto counts = w.multiplicities();
  std::vector<std::size_t> cumulative(counts.size(), 0);
  for (std::size_t i = 1; i < counts.size(); ++i) cumulative[i] = cumulative[i - 1] + counts[i];
  std::vector<std::size_t> seen(counts.size(), 0);
  std::vector<int> out;
  out.reserve(w.size());
  for (int x : w.letters()) {
    const std::size_t j = ++seen[x];
    out.push_back(static_cast<int>(cumulative[x] - j + 1));
  }
  return Word(std::move(out), std::max<int>(1, static_cast<int>(w.size())));
}

}  // namespace packing
