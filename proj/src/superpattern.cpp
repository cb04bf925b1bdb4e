#include "packing/superpattern.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "packing/construct.hpp"

namespace packing {

namespace {

void check_args(int l, int m) {
  if (l < 1 || m < 1) throw std::invalid_argument("superpattern needs l >= 1 and m >= 1");
  if (m > 12) throw std::invalid_argument("superpattern supports m <= 12");
}

// Position of x relative to the sorted distinct values vals[0..d): 2i+1 when
// x == vals[i], 2g when exactly g values lie below x.
inline int rank_class(const int* vals, int d, int x) {
  int g = 0;
  while (g < d && vals[g] < x) ++g;
  return (g < d && vals[g] == x) ? 2 * g + 1 : 2 * g;
}

// Every canonical word of length <= m, linked by "append a letter in rank
// class c". Node 0 is the empty word.
class TypeTrie {
 public:
  explicit TypeTrie(int m) {
    std::map<std::vector<int>, int> index;
    words_.push_back({});
    distinct_.push_back(0);
    index[{}] = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      child_.emplace_back();
      if (static_cast<int>(words_[i].size()) == m) continue;
      const int d = distinct_[i];
      for (int c = 0; c <= 2 * d; ++c) {
        std::vector<int> w = words_[i];
        int nd = d;
        if (c % 2 == 1) {
          w.push_back((c + 1) / 2);
        } else {
          const int g = c / 2;
          for (int& x : w)
            if (x > g) ++x;
          w.push_back(g + 1);
          ++nd;
        }
        auto [it, fresh] = index.emplace(w, static_cast<int>(words_.size()));
        if (fresh) {
          words_.push_back(w);
          distinct_.push_back(nd);
        }
        child_[i].push_back(it->second);
      }
    }
    index_ = std::move(index);
  }

  int size() const { return static_cast<int>(words_.size()); }
  int child(int node, int c) const { return child_[node][c]; }
  int find(const std::vector<int>& w) const { return index_.at(w); }

 private:
  std::vector<std::vector<int>> words_;
  std::vector<int> distinct_;
  std::vector<std::vector<int>> child_;
  std::map<std::vector<int>, int> index_;
};

// Shared, read-only description of one (l, m, L) decision problem.
struct Problem {
  int l, m, L;
  int cap = 0;  // largest number of distinct letters, 0 for none
  TypeTrie trie;
  std::vector<int> universe;               // trie nodes of the patterns
  std::vector<std::vector<int>> prefix;    // prefix[u][j] = node of flatten(pi[0..j))
  std::vector<int> last_class;             // class of pi's last letter w.r.t. its prefix
  std::vector<std::vector<int>> by_prefix; // (m-1)-prefix node -> universe indices
  int words;

  Problem(int l_, int m_, int L_) : l(l_), m(m_), L(L_), trie(m_) {
    for (const auto& w : enumerate_canonical(m, l)) {
      const int u = static_cast<int>(universe.size());
      universe.push_back(trie.find(w.letters()));
      std::vector<int> pre{0};
      for (int j = 1; j <= m; ++j) {
        std::vector<int> head(w.letters().begin(), w.letters().begin() + j);
        pre.push_back(trie.find(flatten(head)));
      }
      prefix.push_back(pre);
      std::vector<int> vals(w.letters().begin(), w.letters().end() - 1);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      last_class.push_back(rank_class(vals.data(), static_cast<int>(vals.size()), w.letters().back()));
      if (by_prefix.empty()) by_prefix.resize(trie.size());
      by_prefix[pre[m - 1]].push_back(u);
    }
    words = (trie.size() + 63) / 64;
  }
};

inline bool bit(const std::uint64_t* b, int i) { return (b[i >> 6] >> (i & 63)) & 1; }

// Some missing pattern needs more letters than the r = L - t that remain.
bool hopeless(const Problem& pb, const std::uint64_t* bits, int t) {
  const int need = pb.m - (pb.L - t);
  if (need < 1) return false;
  for (std::size_t u = 0; u < pb.universe.size(); ++u) {
    if (!bit(bits, pb.universe[u]) && !bit(bits, pb.prefix[u][need])) return true;
  }
  return false;
}

// Every distinct letter sequence s of length 1..m-1 occurring in the current
// word, with its type, its value set (bitmask over letter ids) and the end
// of its leftmost embedding. Appending x creates exactly the sequences s.x
// whose leftmost end is at or after the last earlier x; these form a suffix
// of the list, since entries are appended in position order.
class SequenceList {
 public:
  struct Entry {
    std::uint32_t ids;
    std::uint16_t code;
    std::uint8_t len;
    std::uint8_t end;
  };

  explicit SequenceList(const Problem& pb) : pb_(pb), first_at_(pb.L + 1, 0), last_(pb.L + 2, -1) {}

  void reset() {
    entries_.clear();
    std::fill(last_.begin(), last_.end(), -1);
  }

  // Appends letter id x at position t and sets the newly occurring types in
  // `bits`. `below` holds the ids whose value is smaller than x's. Returns
  // what pop() needs to undo the step.
  __attribute__((target_clones("popcnt", "default"))) int push(int t, int x, std::uint32_t below,
                                                                std::uint64_t* bits) {
    const std::size_t from = last_[x] < 0 ? 0 : first_at_[last_[x]];
    const std::size_t to = entries_.size();
    first_at_[t] = to;
    const int m = pb_.m;
    const std::uint32_t self = 1u << x;
    if (last_[x] < 0) {
      const int node = pb_.trie.child(0, 0);
      bits[node >> 6] |= std::uint64_t{1} << (node & 63);
      if (m > 1) entries_.push_back({self, static_cast<std::uint16_t>(node), 1, static_cast<std::uint8_t>(t)});
    }
    for (std::size_t i = from; i < to; ++i) {
      const Entry e = entries_[i];
      const int c = 2 * __builtin_popcount(e.ids & below) + ((e.ids & self) ? 1 : 0);
      const int node = pb_.trie.child(e.code, c);
      bits[node >> 6] |= std::uint64_t{1} << (node & 63);
      if (e.len + 1 < m)
        entries_.push_back({e.ids | self, static_cast<std::uint16_t>(node), static_cast<std::uint8_t>(e.len + 1),
                            static_cast<std::uint8_t>(t)});
    }
    const int prev = last_[x];
    last_[x] = t;
    return prev;
  }

  void pop(int x, int prev, std::size_t size) {
    last_[x] = prev;
    entries_.resize(size);
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  const Problem& pb_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> first_at_;
  std::vector<int> last_;
};

struct Shared {
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> exhausted{false};
  std::atomic<bool> found{false};
  std::uint64_t max_nodes = 0;
  double max_seconds = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::mutex mu;
  std::vector<int> witness;
};

// Depth-first search over the insertion tree. A node is a flattened prefix
// (D distinct values); child c appends a letter equal to the value of rank
// (c+1)/2 (c odd) or a new value just above rank c/2 (c even). Values carry
// ids in order of first appearance, so inserting a new value never renames
// the others; `order_` maps rank to id and `rank_` back.
class Worker {
 public:
  Worker(const Problem& pb, Shared& sh) : pb_(pb), sh_(sh), seq_(pb) {
    ids_.assign(pb.L + 1, 0);
    bits_.assign(pb.L + 1, std::vector<std::uint64_t>(pb.words));
    bits_[0][0] |= 1;
    order_.assign(pb.L + 2, 0);
    rank_.assign(pb.L + 2, 0);
    missing_.reserve(pb.universe.size());
    allowed_.assign(pb.universe.size(), 0);
  }

  ~Worker() { flush(); }

  // Explores the subtree reached from the root by the given child classes.
  void explore(const std::vector<int>& path) {
    path_ = path;
    seq_.reset();
    dfs(0, 0);
  }

  void flush() {
    if (local_ == 0) return;
    const std::uint64_t total = sh_.nodes.fetch_add(local_) + local_;
    local_ = 0;
    if (sh_.max_nodes && total >= sh_.max_nodes) {
      sh_.exhausted = true;
      sh_.stop = true;
    }
    if (sh_.max_seconds > 0) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - sh_.start;
      if (el.count() > sh_.max_seconds) {
        sh_.exhausted = true;
        sh_.stop = true;
      }
    }
  }

 private:
  void tick(std::uint64_t n) {
    local_ += n;
    if (local_ >= 4096) flush();
  }

  std::uint32_t below_rank(int r) const {
    std::uint32_t mask = 0;
    for (int i = 1; i < r; ++i) mask |= 1u << order_[i];
    return mask;
  }

  void dfs(int t, int D) {
    if (sh_.stop.load(std::memory_order_relaxed)) return;
    const std::uint64_t* bits = bits_[t].data();
    if (hopeless(pb_, bits, t)) return;
    const bool forced = t < static_cast<int>(path_.size());
    const bool full = pb_.cap > 0 && D >= pb_.cap;
    if (!forced && t == pb_.L - 1) {
      tick(full ? D : 2 * D + 1);
      std::uint64_t mask = leaves(t, D);
      if (full) mask &= 0xAAAAAAAAAAAAAAAAull;  // equal-value classes only
      if (mask) report(t, mask);
      return;
    }
    const int c_lo = forced ? path_[t] : 0;
    const int c_hi = forced ? path_[t] : 2 * D;
    const std::size_t saved = seq_.size();
    for (int c = c_lo; c <= c_hi; ++c) {
      if (full && c % 2 == 0) continue;
      if (sh_.stop.load(std::memory_order_relaxed)) return;
      if (!forced) tick(1);
      bits_[t + 1] = bits_[t];
      if (c % 2 == 1) {
        const int r = (c + 1) / 2;
        const int x = order_[r];
        const int prev = seq_.push(t, x, below_rank(r), bits_[t + 1].data());
        ids_[t] = x;
        dfs(t + 1, D);
        seq_.pop(x, prev, saved);
      } else {
        // New id D+1 takes rank g+1.
        const int g = c / 2;
        const int x = D + 1;
        for (int i = D; i > g; --i) {
          order_[i + 1] = order_[i];
          rank_[order_[i + 1]] = i + 1;
        }
        order_[g + 1] = x;
        rank_[x] = g + 1;
        const int prev = seq_.push(t, x, below_rank(g + 1), bits_[t + 1].data());
        ids_[t] = x;
        dfs(t + 1, D + 1);
        seq_.pop(x, prev, saved);
        for (int i = g + 1; i <= D; ++i) {
          order_[i] = order_[i + 1];
          rank_[order_[i]] = i;
        }
      }
    }
  }

  // Mask of last-letter classes (2r-1: equal to the value of rank r; 2g:
  // new value just above rank g) completing every missing pattern.
  std::uint64_t leaves(int t, int D) {
    const std::uint64_t* bits = bits_[t].data();
    const std::uint64_t all = (std::uint64_t{1} << (2 * D + 1)) - 1;
    missing_.clear();
    for (std::size_t u = 0; u < pb_.universe.size(); ++u) {
      if (!bit(bits, pb_.universe[u])) {
        missing_.push_back(static_cast<int>(u));
        allowed_[u] = 0;
      }
    }
    if (missing_.empty() || pb_.m == 1) return all;
    for (const auto& e : seq_.entries()) {
      if (e.len != pb_.m - 1) continue;
      const auto& targets = pb_.by_prefix[e.code];
      if (targets.empty()) continue;
      int vals[16];
      int d = 0;
      for (std::uint32_t v = e.ids; v; v &= v - 1) {
        const int r = rank_[__builtin_ctz(v)];
        int i = d++;
        while (i > 0 && vals[i - 1] > r) {
          vals[i] = vals[i - 1];
          --i;
        }
        vals[i] = r;
      }
      for (int u : targets) {
        const int c = pb_.last_class[u];
        if (c % 2 == 1) {
          allowed_[u] |= std::uint64_t{1} << (2 * vals[(c - 1) / 2] - 1);
        } else {
          const int g = c / 2;
          const int a = g > 0 ? vals[g - 1] : 0;
          const int b = g < d ? vals[g] : D + 1;
          allowed_[u] |= ((std::uint64_t{1} << (2 * b - 1)) - 1) & ~((std::uint64_t{1} << (2 * a)) - 1);
        }
      }
    }
    std::uint64_t mask = all;
    for (int u : missing_) mask &= allowed_[u];
    return mask;
  }

  void report(int t, std::uint64_t mask) {
    const int c = __builtin_ctzll(mask);
    std::vector<int> w;
    for (int i = 0; i < t; ++i) w.push_back(rank_[ids_[i]]);
    if (c % 2 == 1) {
      w.push_back((c + 1) / 2);
    } else {
      for (int& x : w)
        if (x > c / 2) ++x;
      w.push_back(c / 2 + 1);
    }
    std::lock_guard<std::mutex> lock(sh_.mu);
    if (!sh_.found) {
      sh_.found = true;
      sh_.witness = w;
    }
    sh_.stop = true;
  }

  const Problem& pb_;
  Shared& sh_;
  SequenceList seq_;
  std::vector<int> path_;
  std::vector<int> ids_;
  std::vector<std::vector<std::uint64_t>> bits_;
  std::vector<int> order_;
  std::vector<int> rank_;
  std::vector<int> missing_;
  std::vector<std::uint64_t> allowed_;
  std::uint64_t local_ = 0;
};

// Child-class paths from the root to every insertion-tree node at `depth`.
void insertion_paths(int depth, int cap, std::vector<int>& cur, int D, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == depth) {
    out.push_back(cur);
    return;
  }
  for (int c = 0; c <= 2 * D; ++c) {
    if (cap > 0 && D >= cap && c % 2 == 0) continue;
    cur.push_back(c);
    insertion_paths(depth, cap, cur, c % 2 == 1 ? D : D + 1, out);
    cur.pop_back();
  }
}

// Lexicographically least canonical universal word of length L, or nullopt
// when the budget runs out first (or none exists).
class LexSearch {
 public:
  LexSearch(const Problem& pb, Shared& sh) : pb_(pb), sh_(sh), seq_(pb) {
    letters_.assign(pb.L, 0);
    used_.assign(pb.L + 2, 0);
    bits_.assign(pb.L + 1, std::vector<std::uint64_t>(pb.words));
    bits_[0][0] |= 1;
  }

  std::optional<std::vector<int>> run() {
    if (dfs(0, 0, 0)) return letters_;
    return std::nullopt;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  bool out_of_budget() {
    if (sh_.max_nodes && sh_.nodes.load() + nodes_ >= sh_.max_nodes) return true;
    return false;
  }

  // Canonical completion: every letter below the maximum must eventually
  // be used.
  bool dfs(int t, int mx, int distinct) {
    if (out_of_budget()) {
      sh_.exhausted = true;
      return false;
    }
    const std::uint64_t* bits = bits_[t].data();
    if (hopeless(pb_, bits, t)) return false;
    if (t == pb_.L) {
      for (int u : pb_.universe)
        if (!bit(bits, u)) return false;
      return true;
    }
    const int remaining = pb_.L - t - 1;
    for (int x = 1; x <= std::min(pb_.L, mx + 1 + remaining); ++x) {
      const int nmx = std::max(mx, x);
      const int nd = distinct + (used_[x] == 0 ? 1 : 0);
      if (nmx - nd > remaining) continue;
      if (pb_.cap > 0 && nmx > pb_.cap) break;
      ++nodes_;
      letters_[t] = x;
      bits_[t + 1] = bits_[t];
      // Letters are their own ids here.
      const std::size_t saved = seq_.size();
      const int prev = seq_.push(t, x, (1u << x) - 1, bits_[t + 1].data());
      ++used_[x];
      const bool ok = dfs(t + 1, nmx, nd);
      --used_[x];
      seq_.pop(x, prev, saved);
      if (ok) return true;
      if (sh_.exhausted) return false;
    }
    return false;
  }

  const Problem& pb_;
  Shared& sh_;
  SequenceList seq_;
  std::vector<int> letters_;
  std::vector<int> used_;
  std::vector<std::vector<std::uint64_t>> bits_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

Universe pattern_universe(int l, int m) {
  check_args(l, m);
  Universe uni;
  uni.requested_l = l;
  uni.l = std::min(l, m);
  uni.m = m;
  uni.patterns = enumerate_canonical(m, uni.l);
  return uni;
}

UniversalityReport is_universal(const Word& w, int l, int m) {
  auto uni = pattern_universe(l, m);
  // Flattened m-subsequences, packed 4 bits per letter.
  std::unordered_set<std::uint64_t> seen;
  const auto& x = w.letters();
  const int n = static_cast<int>(x.size());
  std::vector<int> idx(m);
  std::vector<int> sub(m);
  auto pack = [](const std::vector<int>& f) {
    std::uint64_t key = 0;
    for (int v : f) key = (key << 4) | static_cast<std::uint64_t>(v);
    return key;
  };
  if (n >= m) {
    for (int i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      for (int i = 0; i < m; ++i) sub[i] = x[idx[i]];
      seen.insert(pack(flatten(sub)));
      int i = m - 1;
      while (i >= 0 && idx[i] == n - m + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  UniversalityReport report;
  for (const auto& p : uni.patterns)
    if (!seen.count(pack(p.letters()))) report.missing.push_back(p);
  report.universal = report.missing.empty();
  return report;
}

namespace {

struct Decision {
  std::optional<bool> feasible;
  std::vector<int> witness;
  std::uint64_t nodes = 0;
};

Decision decide(int l, int m, int L, const SearchOptions& options, const SuperSearchOptions& variant,
                std::uint64_t budget_left, std::chrono::steady_clock::time_point start) {
  if (L > 31) throw std::invalid_argument("superpattern search supports lengths <= 31");
  Problem pb(l, m, L);
  pb.cap = variant.max_letters;
  Shared sh;
  sh.max_nodes = budget_left;
  sh.max_seconds = options.budget.max_seconds;
  sh.start = start;

  const int depth = std::min(4, std::max(L - 1, 0));
  std::vector<std::vector<int>> shards;
  std::vector<int> empty;
  insertion_paths(depth, pb.cap, empty, 0, shards);
  if (variant.reverse_shards) std::reverse(shards.begin(), shards.end());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    Worker worker(pb, sh);
    for (std::size_t i = next++; i < shards.size(); i = next++) {
      if (sh.stop) break;
      worker.explore(shards[i]);
      worker.flush();
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, shards.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  Decision d;
  d.nodes = sh.nodes.load();
  if (sh.found) {
    d.feasible = true;
    d.witness = sh.witness;
  } else if (!sh.exhausted) {
    d.feasible = false;
  }
  return d;
}

}  // namespace

std::optional<bool> superpattern_exists(int l, int m, int length, const SearchOptions& options,
                                        std::uint64_t& nodes, Word* witness, const SuperSearchOptions& variant) {
  check_args(l, m);
  if (variant.max_letters < 0) throw std::invalid_argument("max_letters must be >= 0");
  auto d = decide(std::min(l, m), m, length, options, variant, options.budget.max_nodes,
                  std::chrono::steady_clock::now());
  nodes = d.nodes;
  if (witness && d.feasible && *d.feasible) *witness = Word(d.witness);
  return d.feasible;
}

SuperResult shortest_superpattern(int l, int m, const SearchOptions& options, const SuperSearchOptions& variant) {
  auto uni = pattern_universe(l, m);
  if (variant.max_letters < 0 || (variant.max_letters > 0 && variant.max_letters < uni.l))
    throw std::invalid_argument("max_letters must be 0 or at least min(l, m)");
  SuperResult res;
  res.max_letters = variant.max_letters;
  res.requested_l = l;
  res.l = uni.l;
  res.m = m;
  const Word upper = superpattern_word(res.l, m);
  if (!is_universal(upper, res.l, m).universal) throw std::logic_error("upper-bound word is not universal");
  res.upper_bound = static_cast<int>(upper.size());
  res.length = res.upper_bound;
  res.witness = upper;

  // Any universal word has a letter repeated m times and l distinct letters.
  const int lower = m + res.l - 1;
  res.certified_lower_bound = lower;
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t cap = options.budget.max_nodes;

  for (int L = lower; L <= res.upper_bound; ++L) {
    const std::uint64_t left = cap ? (cap > res.nodes ? cap - res.nodes : 0) : 0;
    if (cap && left == 0) {
      res.log.push_back({L, "budget exhausted", 0});
      return res;
    }
    auto d = decide(res.l, m, L, options, variant, left, start);
    res.nodes += d.nodes;
    if (!d.feasible) {
      res.log.push_back({L, "budget exhausted", d.nodes});
      return res;
    }
    if (!*d.feasible) {
      res.log.push_back({L, "infeasible", d.nodes});
      res.certified_lower_bound = L + 1;
      continue;
    }
    res.log.push_back({L, "feasible", d.nodes});
    res.length = L;
    res.lower_bound_certified = true;
    res.witness = Word(d.witness);

    Problem pb(res.l, m, L);
    pb.cap = variant.max_letters;
    Shared sh;
    sh.max_nodes = cap ? std::max<std::uint64_t>(1, cap - std::min(cap, res.nodes)) : 0;
    LexSearch lex(pb, sh);
    auto least = lex.run();
    res.nodes += lex.nodes();
    if (least) res.witness = Word(*least);
    return res;
  }
  return res;
}

}  // namespace packing
