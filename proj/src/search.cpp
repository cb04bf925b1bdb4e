#include "packing/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace packing {

namespace {

/// Tracks a prefix and decides which letters keep it completable to a
/// canonical word of length n over at most k letters: after appending x, the
/// letters below the running maximum that are still unused must fit into
/// the remaining positions.
class CanonicalBuilder {
 public:
  CanonicalBuilder(int n, int k) : n_(n), k_(std::max(1, std::min(n, k))), used_(k_ + 2, 0) {}

  int alphabet() const { return k_; }
  int size() const { return static_cast<int>(letters_.size()); }
  const std::vector<int>& letters() const { return letters_; }

  bool allows(int x) const {
    const int top = std::max(max_, x);
    const int distinct = distinct_ + (used_[x] == 0 ? 1 : 0);
    return top - distinct <= n_ - size() - 1;
  }

  void push(int x) {
    maxima_.push_back(max_);
    max_ = std::max(max_, x);
    if (used_[x]++ == 0) ++distinct_;
    letters_.push_back(x);
  }

  void pop() {
    const int x = letters_.back();
    letters_.pop_back();
    if (--used_[x] == 0) --distinct_;
    max_ = maxima_.back();
    maxima_.pop_back();
  }

 private:
  int n_;
  int k_;
  std::vector<int> used_;
  std::vector<int> letters_;
  std::vector<int> maxima_;
  int max_ = 0;
  int distinct_ = 0;
};

void canonical_prefixes(int depth, int n, int k, std::vector<std::vector<int>>& out) {
  CanonicalBuilder builder(n, k);
  auto rec = [&](auto&& self) -> void {
    if (builder.size() == depth) {
      out.push_back(builder.letters());
      return;
    }
    for (int x = 1; x <= builder.alphabet(); ++x) {
      if (!builder.allows(x)) continue;
      builder.push(x);
      self(self);
      builder.pop();
    }
  };
  rec(rec);
}

struct ScaledSet {
  std::vector<Pattern> patterns;
  std::vector<std::uint64_t> weights;
  std::uint64_t total_weight = 0;
  BigInt scale = 1;
};

ScaledSet scale_weights(const WeightedPatternSet& ps, int n) {
  ScaledSet out;
  for (const auto& e : ps.entries()) {
    out.scale = boost::multiprecision::lcm(out.scale, boost::multiprecision::denominator(e.weight));
  }
  BigInt total = 0;
  for (const auto& e : ps.entries()) {
    if (e.weight == 0) continue;
    BigInt w = boost::multiprecision::numerator(e.weight * Rational(out.scale));
    total += w;
    out.patterns.push_back(e.pattern);
    out.weights.push_back(w.convert_to<std::uint64_t>());
  }
  const BigInt ceiling = total * placement_count(n, ps.pattern_length(), ps.blocks());
  if (ceiling > BigInt(std::numeric_limits<std::int64_t>::max())) {
    throw std::length_error("weighted counts too large for exhaustive search");
  }
  out.total_weight = total.convert_to<std::uint64_t>();
  return out;
}

void validate(const WeightedPatternSet& ps, int k, int n) {
  if (ps.empty()) throw std::invalid_argument("search needs at least one pattern");
  if (k < 1) throw std::invalid_argument("alphabet size k must be positive");
  if (n < static_cast<int>(ps.pattern_length())) {
    throw std::invalid_argument("word length n must be at least the pattern length");
  }
}

struct ShardOutcome {
  std::int64_t best = -1;
  std::vector<int> witness;
};

class BranchAndBound {
 public:
  BranchAndBound(const ScaledSet& set, const WeightedPatternSet& ps, int k, int n, const Budget& budget)
      : set_(set), n_(n), k_(std::min(k, n)), budget_(budget) {
    placements_.resize(n + 1);
    for (int t = 0; t <= n; ++t) {
      placements_[t] = placement_count(t, ps.pattern_length(), ps.blocks()).convert_to<std::uint64_t>();
    }
    if (budget.max_seconds > 0) {
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(budget.max_seconds));
    }
  }

  ShardOutcome run(const std::vector<int>& prefix) {
    ShardOutcome out;
    CanonicalBuilder builder(n_, k_);
    std::vector<std::vector<OccurrenceCounter>> levels(n_ + 1);
    for (const auto& p : set_.patterns) levels[0].emplace_back(p, k_);
    for (int x : prefix) {
      const int t = builder.size();
      levels[t + 1] = levels[t];
      for (auto& c : levels[t + 1]) c.push(x);
      builder.push(x);
    }
    dfs(builder, levels, out);
    return out;
  }

  bool stopped() const { return stop_.load(); }
  std::uint64_t nodes() const { return nodes_.load(); }

 private:
  std::int64_t value(const std::vector<OccurrenceCounter>& counters) const {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < counters.size(); ++i) v += set_.weights[i] * counters[i].count();
    return static_cast<std::int64_t>(v);
  }

  bool charge_node() {
    const std::uint64_t used = nodes_.fetch_add(1) + 1;
    if (budget_.max_nodes != 0 && used > budget_.max_nodes) stop_ = true;
    if (deadline_ && (used & 4095) == 0 && std::chrono::steady_clock::now() > *deadline_) stop_ = true;
    return !stop_.load(std::memory_order_relaxed);
  }

  void offer(std::int64_t v) {
    std::int64_t seen = global_best_.load();
    while (v > seen && !global_best_.compare_exchange_weak(seen, v)) {
    }
  }

  void dfs(CanonicalBuilder& builder, std::vector<std::vector<OccurrenceCounter>>& levels, ShardOutcome& out) {
    const int t = builder.size();
    if (t == n_) {
      const std::int64_t v = value(levels[t]);
      if (v > out.best) {
        out.best = v;
        out.witness = builder.letters();
        offer(v);
      }
      return;
    }
    const std::int64_t open = static_cast<std::int64_t>(set_.total_weight * (placements_[n_] - placements_[t + 1]));
    for (int x = 1; x <= k_; ++x) {
      if (!builder.allows(x)) continue;
      if (!charge_node()) return;
      levels[t + 1] = levels[t];
      for (auto& c : levels[t + 1]) c.push(x);
      const std::int64_t bound = value(levels[t + 1]) + open;
      // Ties with another shard's best survive: that shard may hold a
      // lexicographically larger witness.
      if (bound < global_best_.load(std::memory_order_relaxed) || bound <= out.best) continue;
      builder.push(x);
      dfs(builder, levels, out);
      builder.pop();
      if (stopped()) return;
    }
  }

  const ScaledSet& set_;
  int n_;
  int k_;
  Budget budget_;
  std::vector<std::uint64_t> placements_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::atomic<std::int64_t> global_best_{-1};
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> stop_{false};
};

Rational scaled_value(const ShardOutcome& outcome, const BigInt& scale) {
  return outcome.best < 0 ? Rational(0) : Rational(BigInt(outcome.best), scale);
}

}  // namespace

void for_each_canonical(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (n < 0 || k < 1) throw std::invalid_argument("for_each_canonical needs n >= 0 and k >= 1");
  if (n == 0) {
    visit({});
    return;
  }
  CanonicalBuilder builder(n, k);
  auto rec = [&](auto&& self) -> void {
    if (builder.size() == n) {
      visit(builder.letters());
      return;
    }
    for (int x = 1; x <= builder.alphabet(); ++x) {
      if (!builder.allows(x)) continue;
      builder.push(x);
      self(self);
      builder.pop();
    }
  };
  rec(rec);
}

std::vector<Word> enumerate_canonical(int n, int k) {
  std::vector<Word> out;
  const int alphabet = std::max(1, std::min(n, k));
  for_each_canonical(n, k, [&](const std::vector<int>& w) { out.emplace_back(w, alphabet); });
  return out;
}

SearchResult max_count(const WeightedPatternSet& ps, int k, int n, const SearchOptions& options) {
  validate(ps, k, n);
  const ScaledSet set = scale_weights(ps, n);
  const int alphabet = std::min(k, n);

  SearchResult result;
  result.patterns = ps;
  result.k = k;
  result.n = n;

  if (set.patterns.empty()) {
    // Every weight is zero: any word attains 0, the least canonical one is 1^n.
    result.mu = 0;
    result.delta = 0;
    result.witness = Word(std::vector<int>(n, 1), alphabet);
    result.exhaustive = true;
    return result;
  }
  for (const auto& p : set.patterns) {
    if (!OccurrenceCounter::fits(p, alphabet)) throw std::length_error("instance too large for exhaustive search");
  }

  BranchAndBound engine(set, ps, k, n, options.budget);
  std::vector<std::vector<int>> shards;
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) shards.push_back({});
  else canonical_prefixes(std::min(n, 2), n, alphabet, shards);

  std::vector<ShardOutcome> outcomes(shards.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < shards.size(); i = next++) outcomes[i] = engine.run(shards[i]);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < std::min<std::size_t>(threads, shards.size()); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Highest count wins; among equal counts the lexicographically least word.
  const ShardOutcome* best = nullptr;
  for (const auto& o : outcomes) {
    if (o.best < 0) continue;
    if (!best || o.best > best->best || (o.best == best->best && o.witness < best->witness)) best = &o;
  }
  result.nodes_explored = engine.nodes();
  result.exhaustive = !engine.stopped();
  if (best) {
    result.mu = scaled_value(*best, set.scale);
    result.witness = Word(best->witness, alphabet);
  } else {
    result.mu = 0;
  }
  result.delta = result.mu / Rational(placement_count(n, ps.pattern_length(), ps.blocks()));
  return result;
}

SearchResult delta_exact(const WeightedPatternSet& ps, int k, int n, const SearchOptions& options) {
  return max_count(ps, k, n, options);
}

SeriesReport delta_series(const WeightedPatternSet& ps, int n_lo, int n_hi, KPolicy policy, int fixed_k,
                          const SearchOptions& options) {
  if (ps.empty()) throw std::invalid_argument("series needs at least one pattern");
  const int m = static_cast<int>(ps.pattern_length());
  n_lo = std::max(n_lo, m);
  if (n_hi < n_lo) throw std::invalid_argument("empty n range");
  if (policy == KPolicy::Fixed && fixed_k < 1) throw std::invalid_argument("fixed k must be positive");

  // delta(k, n) depends on k only through min(k, n).
  std::map<std::pair<int, int>, SearchResult> cache;
  auto get = [&](int k, int n) -> const SearchResult& {
    const auto key = std::make_pair(std::min(k, n), n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, delta_exact(ps, key.first, n, options)).first;
    return it->second;
  };

  SeriesReport report;
  bool first = true;
  for (int n = n_lo; n <= n_hi; ++n) {
    const int k = policy == KPolicy::Diagonal ? n : fixed_k;
    SearchResult row = get(k, n);
    row.k = k;
    if (row.exhaustive && (first || row.delta < report.infimum_so_far)) report.infimum_so_far = row.delta;
    first = false;

    if (n > m) {
      const auto& shorter = get(k, n - 1);
      if (!row.exhaustive || !shorter.exhaustive) report.audit_complete = false;
      else if (row.delta > shorter.delta) report.violations.push_back({n, k, "n", row.delta, shorter.delta});
    }
    if (k > 1) {
      const auto& fewer = get(k - 1, n);
      if (!row.exhaustive || !fewer.exhaustive) report.audit_complete = false;
      else if (row.delta < fewer.delta) report.violations.push_back({n, k, "k", row.delta, fewer.delta});
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

void require_permutations(const WeightedPatternSet& ps) {
  for (const auto& e : ps.entries()) {
    if (!e.pattern.is_permutation()) throw std::invalid_argument("pattern " + format_pattern(e.pattern) + " is not a permutation");
  }
}

Rational weighted_value(const WeightedPatternSet& ps, const std::vector<int>& word, int alphabet) {
  Rational total = 0;
  for (const auto& e : ps.entries()) {
    if (e.weight == 0) continue;
    OccurrenceCounter counter(e.pattern, alphabet);
    for (int x : word) counter.push(x);
    total += e.weight * Rational(counter.count());
  }
  return total;
}

}  // namespace

RestrictionReport verify_perm_restriction(const WeightedPatternSet& ps, int n, const SearchOptions& options) {
  require_permutations(ps);
  RestrictionReport report;
  const SearchResult words = max_count(ps, n, n, options);
  report.words_max = words.mu;
  report.words_witness = words.witness;
  report.exhaustive = words.exhaustive;

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  bool any = false;
  do {
    Rational v = weighted_value(ps, perm, n);
    if (!any || v > report.permutations_max) {
      report.permutations_max = v;
      report.permutation_witness = Word(perm, n);
      any = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  report.equal = report.words_max == report.permutations_max;
  return report;
}

LayeredWitnessReport verify_layered_witness(const WeightedPatternSet& ps, int n) {
  LayeredWitnessReport report;
  report.strict_condition = true;
  for (const auto& e : ps.entries()) {
    auto layers = layered_decompose(e.pattern);
    if (!e.pattern.is_classical() || !e.pattern.is_permutation() || !layers) {
      throw std::invalid_argument("pattern " + format_pattern(e.pattern) + " is not a layered permutation");
    }
    if (layers->shape.min_length() <= 1) report.strict_condition = false;
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  bool any = false;
  do {
    Rational v = weighted_value(ps, perm, n);
    const bool layered = layered_decompose(perm).has_value();
    if (!any || v > report.max) {
      report.max = v;
      report.maximizers = 0;
      report.layered_maximizers = 0;
      report.layered_witness.reset();
      any = true;
    }
    if (v == report.max) {
      ++report.maximizers;
      if (layered) {
        ++report.layered_maximizers;
        if (!report.layered_witness) report.layered_witness = Word(perm, n);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  report.holds = report.layered_maximizers > 0 &&
                 (!report.strict_condition || report.layered_maximizers == report.maximizers);
  return report;
}

}  // namespace packing
