// End-to-end acceptance run: one PASS/FAIL line per criterion. Exit status is
// the number of failed criteria (capped at 1 for ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "packing/cli.hpp"
#include "packing/construct.hpp"
#include "packing/count.hpp"
#include "packing/density.hpp"
#include "packing/roots.hpp"
#include "packing/search.hpp"
#include "packing/superpattern.hpp"

using namespace packing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report.
struct Tally {
  long long checks = 0;
  long long failures = 0;
  std::vector<std::string> first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (first.size() < 3) first.push_back(what);
  }

  Outcome outcome(std::string detail) const {
    Outcome o{failures == 0, std::move(detail)};
    o.detail += "; " + std::to_string(checks) + " checks, " + std::to_string(failures) + " failures";
    for (const auto& f : first) o.detail += "; " + f;
    return o;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

Pattern pat(const char* text) { return parse_pattern_notation(text).pattern; }

const double kTwoRootThreeMinusThree = 2 * std::sqrt(3.0) - 3;

Outcome opening_example() {
  const Pattern p = pat("122");
  const Word w = parse_word("213322");
  double best = 1e9;
  BigInt c;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    c = count(p, w);
    best = std::min(best, seconds_since(t0));
  }
  const auto d = density(WeightedPatternSet(p), w).d;
  Tally t;
  t.expect(c == 3, "count is " + c.str());
  t.expect(d == Rational(3, 20), "density is " + to_string(d));
  t.expect(best < 1e-3, "took " + fixed(best * 1e3, 3) + " ms");
  return t.outcome("nu = " + c.str() + ", d = " + to_string(d) + ", " + fixed(best * 1e6, 1) + " us");
}

// Every canonical pattern of length <= 4 with every hyphenation, against
// every canonical word of length <= 8. Words are walked as a prefix tree so
// each counter takes one push per tree node. The reference tallies each
// index subset once: a subset contributes to a hyphenation when every
// unhyphenated gap sits between adjacent positions.
Outcome counting_oracle() {
  constexpr int kMaxN = 8;
  constexpr int kMaxM = 4;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<int>> shapes;
  for (int m = 1; m <= kMaxM; ++m)
    for (auto& s : oracle::canonical_words_brute(m, m)) shapes.push_back(s);
  // Shape lookup by (length, flattened letters) packed in base 5.
  auto code_of = [](const int* letters, int len) {
    int code = len;
    for (int i = 0; i < len; ++i) code = code * 5 + letters[i];
    return code;
  };
  std::vector<int> shape_index(5 * 5 * 5 * 5 * 5, -1);
  for (std::size_t s = 0; s < shapes.size(); ++s)
    shape_index[code_of(shapes[s].data(), static_cast<int>(shapes[s].size()))] = static_cast<int>(s);
  struct Case {
    Pattern pattern;
    int shape;
    unsigned free_gaps;  // bit j set: no hyphen between letters j and j+1
  };
  std::vector<Case> cases;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const int gaps = static_cast<int>(shapes[s].size()) - 1;
    for (unsigned mask = 0; mask < (1u << gaps); ++mask) {
      std::vector<bool> hyphens(gaps);
      for (int j = 0; j < gaps; ++j) hyphens[j] = !((mask >> j) & 1u);
      cases.push_back({Pattern(shapes[s], hyphens), static_cast<int>(s), mask});
    }
  }
  std::vector<std::vector<OccurrenceCounter>> level(kMaxN + 1);
  for (auto& counters : level)
    for (const auto& c : cases) counters.emplace_back(c.pattern, kMaxN);
  std::vector<std::uint64_t> expected(shapes.size() * 8);

  Tally t;
  long long words = 0;
  int word[kMaxN];
  auto check = [&](int n) {
    ++words;
    std::fill(expected.begin(), expected.end(), 0);
    for (unsigned sub = 1; sub < (1u << n); ++sub) {
      const int size = __builtin_popcount(sub);
      if (size > kMaxM) continue;
      int picked[kMaxM];
      int len = 0;
      unsigned adjacent = 0;
      int prev = -2;
      for (int i = 0; i < n; ++i) {
        if (!((sub >> i) & 1u)) continue;
        if (len > 0 && i == prev + 1) adjacent |= 1u << (len - 1);
        picked[len++] = word[i];
        prev = i;
      }
      int flat[kMaxM];
      for (int i = 0; i < len; ++i) {
        flat[i] = 1;
        for (int j = 0; j < len; ++j) {
          bool fresh = picked[j] < picked[i];
          for (int q = 0; q < j && fresh; ++q) fresh = picked[q] != picked[j];
          if (fresh) ++flat[i];
        }
      }
      const int s = shape_index[code_of(flat, len)];
      const unsigned gaps = 1u << (len - 1);
      for (unsigned mask = 0; mask < gaps; ++mask)
        if ((mask & adjacent) == mask) ++expected[s * 8 + mask];
    }
    const auto& counters = level[n];
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const std::uint64_t got = counters[i].count();
      const std::uint64_t want = expected[cases[i].shape * 8 + cases[i].free_gaps];
      if (got != want)
        t.expect(false, format_pattern_notation(cases[i].pattern) + " in " +
                            format_letters(std::vector<int>(word, word + n)) + ": " + std::to_string(got) + " vs " +
                            std::to_string(want));
      else
        ++t.checks;
    }
  };
  // Prefixes that extend to a canonical word of length kMaxN: the values
  // missing below the maximum must fit in the remaining positions.
  std::function<void(int, unsigned, int)> walk = [&](int len, unsigned used, int mx) {
    for (int x = 1; x <= kMaxN; ++x) {
      const unsigned now = used | (1u << x);
      const int nmx = std::max(mx, x);
      const int distinct = __builtin_popcount(now);
      if (nmx - distinct > kMaxN - (len + 1)) continue;
      word[len] = x;
      for (std::size_t i = 0; i < cases.size(); ++i) {
        level[len + 1][i] = level[len][i];
        level[len + 1][i].push(x);
      }
      if (nmx == distinct) check(len + 1);
      if (len + 1 < kMaxN) walk(len + 1, now, nmx);
    }
  };
  walk(0, 0, 0);
  // The library's own counting entry point on a sample of the same words.
  std::mt19937_64 rng(7);
  for (int s = 0; s < 2000; ++s) {
    const int n = 1 + static_cast<int>(rng() % kMaxN);
    std::vector<int> letters(n);
    for (int& x : letters) x = 1 + static_cast<int>(rng() % n);
    const Word w(flatten(letters));
    const auto& c = cases[rng() % cases.size()];
    t.expect(count(c.pattern, w) == oracle::naive_count(c.pattern, w.letters()),
             "count() on " + format_word(w) + " for " + format_pattern_notation(c.pattern));
  }
  return t.outcome(std::to_string(cases.size()) + " patterns x " + std::to_string(words) + " words in " +
                   fixed(seconds_since(t0), 1) + " s");
}

Outcome three_letter_table_check() {
  const std::map<std::string, double> closed{{"111", 1.0},
                                             {"112", kTwoRootThreeMinusThree},
                                             {"121", std::sqrt(3.0) - 1.5},
                                             {"123", 1.0},
                                             {"132", kTwoRootThreeMinusThree}};
  Tally t;
  std::string shown;
  const auto rows = three_letter_table();
  t.expect(rows.size() == closed.size(), "table has " + std::to_string(rows.size()) + " rows");
  for (const auto& r : rows) {
    const auto it = closed.find(r.representative);
    if (it == closed.end()) {
      t.expect(false, "unexpected row " + r.representative);
      continue;
    }
    t.expect(std::abs(r.density.value - it->second) <= 1e-10, r.representative + " = " + fixed(r.density.value, 15));
    shown += " " + r.representative + "=" + fixed(r.density.value, 10);
  }
  // Printed approximation 0.4641.
  t.expect(fixed(kTwoRootThreeMinusThree, 4) == "0.4641", "2 sqrt3 - 3 rounds to " + fixed(kTwoRootThreeMinusThree, 4));
  for (const auto& r : rows)
    if (r.representative == "112" || r.representative == "132")
      t.expect(fixed(r.density.value, 4) == "0.4641", r.representative + " rounds to " + fixed(r.density.value, 4));
  return t.outcome("table" + shown);
}

Outcome exact_search_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  std::string shown;
  for (const char* text : {"132", "112", "121"}) {
    const WeightedPatternSet ps(pat(text));
    // Each finite value bounds the limit from above.
    const double floor = density_of(pat(text)).value;
    Rational prev = -1;
    shown += std::string(" ") + text + ":";
    for (int n = 4; n <= 8; ++n) {
      const auto r = delta_exact(ps, n, n);
      const std::string at = std::string(text) + " n=" + std::to_string(n);
      t.expect(r.exhaustive, at + " not exhaustive");
      t.expect(r.delta > 0, at + " not positive");
      if (prev >= 0) t.expect(r.delta <= prev, at + " increased");
      t.expect(to_double(r.delta) >= floor - 1e-12, at + " below the limit " + fixed(floor, 12));
      prev = r.delta;
      shown += " " + to_string(r.delta);
    }
  }
  return t.outcome(shown.substr(1) + " (" + fixed(seconds_since(t0), 1) + " s)");
}

Outcome monotonicity_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  for (const char* text : {"112", "121", "1122", "12-1"}) {
    const WeightedPatternSet ps(pat(text));
    const int m0 = static_cast<int>(ps.pattern_length());
    std::map<std::pair<int, int>, Rational> delta;
    for (int n = m0; n <= 8; ++n) {
      for (int k = 1; k <= n; ++k) {
        const auto r = delta_exact(ps, k, n);
        t.expect(r.exhaustive, std::string(text) + " not exhaustive");
        delta[{k, n}] = r.delta;
      }
    }
    for (const auto& [kn, v] : delta) {
      const auto [k, n] = kn;
      const std::string at = std::string(text) + " k=" + std::to_string(k) + " n=" + std::to_string(n);
      if (n - 1 >= k && n - 1 >= m0)
        t.expect(v <= delta.at({k, n - 1}), at + ": grows in n");
      if (k > 1) t.expect(v >= delta.at({k - 1, n}), at + ": shrinks in k");
    }
    // Extra letters beyond n never help: library search and an all-words
    // brute force over the larger alphabet.
    const Pattern p = pat(text);
    const auto m = p.size();
    for (int n = m0; n <= 8; ++n) {
      for (int k = n + 1; k <= n + 2; ++k) {
        const auto r = delta_exact(ps, k, n);
        t.expect(r.delta == delta.at({n, n}), std::string(text) + " saturation at k=" + std::to_string(k));
        if (n <= 5) {
          std::uint64_t best = 0;
          for (const auto& w : oracle::all_words(n, k)) best = std::max(best, oracle::naive_count(p, w));
          const BigInt places = placement_count(n, static_cast<long long>(m), p.blocks());
          const Rational brute = places == 0 ? Rational(0) : Rational(BigInt(best), places);
          t.expect(brute == delta.at({n, n}),
                   std::string(text) + " brute saturation n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
      }
    }
  }
  return t.outcome("112, 121, 1122, 12-1 over k <= n <= 8 (" + fixed(seconds_since(t0), 1) + " s)");
}

Outcome permutation_restriction() {
  Tally t;
  std::mt19937_64 rng(20240613);
  std::string shown;
  for (const char* text : {"132", "123", "2143"}) {
    const WeightedPatternSet ps(pat(text));
    const Pattern p = pat(text);
    for (int n = static_cast<int>(p.size()); n <= 7; ++n) {
      const auto r = verify_perm_restriction(ps, n);
      const std::string at = std::string(text) + " n=" + std::to_string(n);
      t.expect(r.exhaustive && r.equal, at + ": words " + to_string(r.words_max) + " vs permutations " +
                                            to_string(r.permutations_max));
      std::uniform_int_distribution<int> letter(1, n);
      for (int s = 0; s < 1000; ++s) {
        std::vector<int> letters(n);
        for (int& x : letters) x = letter(rng);
        const Word w(letters, n);
        const Word f = tie_break_permutation(w);
        t.expect(count(p, f) >= count(p, w), at + ": map loses occurrences on " + format_word(w));
      }
    }
    shown += std::string(" ") + text;
  }
  return t.outcome("patterns" + shown + ", n <= 7, 1000 sampled words per n");
}

Outcome closed_forms() {
  Tally t;
  const auto rs = r_s_density(2, 2);
  t.expect(rs.exact && *rs.exact == Rational(3, 8), "r_s_density(2,2) = " + fixed(rs.value, 12));
  std::string shown;
  for (const char* text : {"1123", "1233", "1243"}) {
    const auto d = density_of(pat(text), "layered");
    t.expect(d.exact && *d.exact == Rational(3, 8), std::string(text) + " = " + fixed(d.value, 12));
    shown += std::string(" ") + text + "=" + (d.exact ? to_string(*d.exact) : fixed(d.value, 12));
  }
  const auto q112 = pqr_density(1, 1, 2);
  t.expect(q112.exact && *q112.exact == Rational(3, 16), "pqr(1,1,2) = " + fixed(q112.value, 12));
  const auto q111 = pqr_density(1, 1, 1);
  t.expect(std::abs(q111.value - (std::sqrt(3.0) - 1.5)) <= 1e-10, "pqr(1,1,1) = " + fixed(q111.value, 15));
  return t.outcome("rs(2,2)=3/8," + shown + ", pqr(1,1,2)=" + (q112.exact ? to_string(*q112.exact) : "?") +
                   ", pqr(1,1,1)=" + fixed(q111.value, 12));
}

Outcome root_checks() {
  Tally t;
  double worst = 0;
  for (int s = 3; s <= 8; ++s) {
    const double approx = 1.0 / (s + 1) - std::pow(s + 1.0, -(s + 2.0));
    const double err = std::abs(alpha_root(s).alpha - approx);
    worst = std::max(worst, err);
    t.expect(err <= std::pow(4.0, -6), "s=" + std::to_string(s) + " off by " + fixed(err, 8));
  }
  double worst_root = 0;
  for (int s = 2; s <= 8; ++s) {
    const double a = 1 - s * alpha_root(s).alpha;
    const auto k1 = k1_density(s);
    const double root = k1.root_a ? *k1.root_a : k1_root(s);
    worst_root = std::max(worst_root, std::abs(a - root));
    t.expect(std::abs(a - root) <= 1e-10, "s=" + std::to_string(s) + " roots differ");
  }
  return t.outcome("worst alpha error " + fixed(worst, 8) + " (bound " + fixed(std::pow(4.0, -6), 8) +
                   "), worst root gap " + std::to_string(worst_root));
}

Outcome cap_optimizer() {
  Tally t;
  const auto a = layered_density_cap(LayeredShape({2, 1}), 2);
  t.expect(std::abs(a.value - 4.0 / 9) <= 1e-9, "[2,1] cap 2 = " + fixed(a.value, 12));
  const auto b = layered_density_cap(LayeredShape({2, 2}), 2);
  t.expect(std::abs(b.value - 3.0 / 8) <= 1e-9, "[2,2] cap 2 = " + fixed(b.value, 12));
  std::string seq;
  double last = 0;
  for (int ell = 2; ell <= 10; ++ell) {
    const double v = layered_density_cap(LayeredShape({2, 2}), ell).value;
    t.expect(v <= 3.0 / 8 + 1e-9, "[2,2] cap " + std::to_string(ell) + " exceeds 3/8");
    seq += " " + fixed(v, 10);
    last = v;
  }
  t.expect(last >= 3.0 / 8 - 1e-6, "[2,2] cap 10 = " + fixed(last, 10));
  return t.outcome("[2,1]@2=" + fixed(a.value, 12) + ", [2,2]@2=" + fixed(b.value, 12) + ", [2,2]@2..10:" + seq);
}

Outcome overlap_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  long long compositions = 0;
  for (int m = 2; m <= 8; ++m) {
    // Compositions of m with at least two parts, as cut masks.
    for (unsigned cuts = 1; cuts < (1u << (m - 1)); ++cuts) {
      std::vector<int> letters{1};
      for (int i = 0; i + 1 < m; ++i) letters.push_back(letters.back() + ((cuts >> i) & 1u));
      const Pattern p = Pattern::subword(letters);
      const auto o = m_overlap(p);
      ++compositions;
      t.expect(o.agree(), format_pattern(p) + ": formula " + std::to_string(o.formula) + ", oracle " +
                              std::to_string(o.oracle) + ", direct " + std::to_string(o.oracle_direct));
    }
  }
  const std::vector<std::pair<const char*, int>> anchors{{"112", 2}, {"123", 1}, {"1432", 3}};
  std::string shown;
  for (const auto& [text, want] : anchors) {
    const int letters_len = static_cast<int>(std::string(text).size());
    std::vector<int> letters;
    for (int i = 0; i < letters_len; ++i) letters.push_back(text[i] - '0');
    const auto o = m_overlap(Pattern::subword(letters));
    t.expect(o.formula == want && o.oracle_direct == want, std::string(text) + " gives " + std::to_string(o.formula));
    shown += " M(" + std::string(text) + ")=" + std::to_string(o.oracle_direct);
  }
  return t.outcome(std::to_string(compositions) + " compositions," + shown + " (" + fixed(seconds_since(t0), 2) +
                   " s)");
}

Outcome twelve_one() {
  Tally t;
  const WeightedPatternSet ps(pat("12-1"));
  std::string shown;
  for (int n = 3; n <= 14; ++n) {
    long long best = std::numeric_limits<long long>::min();
    int d_star = 1;
    for (int d = 1; d <= n; ++d) {
      const long long v = static_cast<long long>(d) * (d - 1) / 2 + static_cast<long long>(d) * (n - 2 * d);
      if (v > best) {
        best = v;
        d_star = d;
      }
    }
    const auto r = max_count(ps, 2, n);
    const std::string at = "n=" + std::to_string(n);
    t.expect(r.exhaustive && r.mu == best, at + ": mu " + to_string(r.mu) + " vs " + std::to_string(best));
    const auto built = twelve_one_word(n, d_star);
    t.expect(flatten(r.witness) == flatten(built.word),
             at + ": witness " + format_word(r.witness) + " vs " + format_word(built.word));
    shown += " " + to_string(r.mu);
  }
  return t.outcome("mu(12-1,2,n) for n=3..14:" + shown);
}

Outcome balanced_trend() {
  Tally t;
  const Pattern p = pat("11-2");
  std::string shown;
  double prev = -1;
  double at20 = 0;
  for (int k : {5, 10, 15, 20}) {
    const Word w = balanced_monotone_word(k * k, k);
    const double d = to_double(density(WeightedPatternSet(p), w).d);
    t.expect(d > prev, "k=" + std::to_string(k) + " does not increase");
    prev = d;
    at20 = d;
    shown += " k=" + std::to_string(k) + ":" + fixed(d, 6);
  }
  t.expect(at20 >= 0.8, "k=20 gives " + fixed(at20, 6));
  return t.outcome("d(11-2):" + shown);
}

Outcome superpatterns() {
  Tally t;
  std::string shown;
  for (int s = 2; s <= 3; ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = shortest_superpattern(s, s);
    const double el = seconds_since(t0);
    const int want = s == 2 ? 3 : 7;
    t.expect(r.length == want && r.lower_bound_certified && el < 60,
             "n(" + std::to_string(s) + "," + std::to_string(s) + ") = " + std::to_string(r.length));
    t.expect(is_universal(r.witness, s, s).universal, "witness not universal");
    shown += "n(" + std::to_string(s) + "," + std::to_string(s) + ")=" + std::to_string(r.length) + " [" +
             format_word(r.witness) + ", " + fixed(el, 3) + " s]; ";
  }
  for (int m = 1; m <= 6; ++m)
    for (int l = 1; l <= m; ++l)
      t.expect(is_universal(superpattern_word(l, m), l, m).universal,
               "staircase (" + std::to_string(l) + "," + std::to_string(m) + ") not universal");
  for (int m = 1; m <= 4; ++m) {
    for (int l = 1; l <= m; ++l) {
      if (l == 4 && m == 4) continue;
      const auto r = shortest_superpattern(l, m);
      t.expect(r.lower_bound_certified && r.length <= l * (m - 1) + 1,
               "(" + std::to_string(l) + "," + std::to_string(m) + ") gives " + std::to_string(r.length));
    }
  }
  // (4,4): the staircase witness, then the certified search.
  const Word stair = superpattern_word(4, 4);
  t.expect(stair.size() == 13 && is_universal(stair, 4, 4).universal, "length-13 word not universal");
  SearchOptions budget;
  budget.budget.max_nodes = 1000000000;
  auto t0 = std::chrono::steady_clock::now();
  const auto full = shortest_superpattern(4, 4, budget);
  const double el_full = seconds_since(t0);
  t.expect(full.length <= 13 && is_universal(full.witness, 4, 4).universal, "(4,4) witness not universal");
  shown += "(4,4): " + format_word(stair) + " universal; ";
  if (full.lower_bound_certified) {
    shown += "certified n(4,4)=" + std::to_string(full.length) + " with " + format_word(full.witness) + " (" +
             std::to_string(full.witness.distinct()) + " letters, " + std::to_string(full.nodes) + " nodes, " +
             fixed(el_full, 1) + " s), shorter than the 13-letter staircase";
  } else {
    shown += "not certified within budget: lower bound " + std::to_string(full.certified_lower_bound) +
             ", upper bound " + std::to_string(full.upper_bound);
  }
  // The deciding infeasible length, re-run with the shard order reversed.
  if (full.lower_bound_certified && full.length > 4) {
    std::uint64_t fwd = 0, rev = 0;
    SuperSearchOptions reversed;
    reversed.reverse_shards = true;
    const auto a = superpattern_exists(4, 4, full.length - 1, budget, fwd);
    const auto b = superpattern_exists(4, 4, full.length - 1, budget, rev, nullptr, reversed);
    t.expect(a && b && !*a && !*b && fwd == rev, "length " + std::to_string(full.length - 1) + " recheck disagrees");
    shown += "; length " + std::to_string(full.length - 1) + " infeasible in both shard orders (" +
             std::to_string(rev) + " nodes)";
  }
  // Words on at most four distinct letters.
  SuperSearchOptions four;
  four.max_letters = 4;
  t0 = std::chrono::steady_clock::now();
  const auto capped = shortest_superpattern(4, 4, budget, four);
  t.expect(capped.witness.distinct() <= 4 && is_universal(capped.witness, 4, 4).universal,
           "four-letter witness not universal");
  if (capped.lower_bound_certified) {
    shown += "; on 4 letters certified " + std::to_string(capped.length) + " with " + format_word(capped.witness) +
             " (" + fixed(seconds_since(t0), 1) + " s)";
  } else {
    shown += "; on 4 letters not certified within budget";
  }
  return t.outcome(shown);
}

Outcome cli_determinism() {
  Tally t;
  const std::vector<std::vector<std::string>> configs{
      {"search", "-p", "132", "-n", "8"},
      {"search", "-p", "1122", "-n", "8", "-k", "3"},
      {"search", "-p", "12-1", "-n", "10", "-k", "2"},
      {"super", "-l", "2", "-m", "3"},
      {"super", "-l", "3", "-m", "3"},
      {"super", "-l", "3", "-m", "4"},
  };
  for (const auto& args : configs) {
    std::string first;
    for (int threads : {1, 4}) {
      auto a = args;
      a.push_back("--threads");
      a.push_back(std::to_string(threads));
      std::ostringstream out, err;
      const int code = cli::run(a, out, err);
      t.expect(code == 0, args[0] + " " + args[2] + " exited " + std::to_string(code));
      auto j = nlohmann::json::parse(out.str());
      j.erase("stats");
      if (threads == 1) {
        first = j.dump();
      } else {
        t.expect(j.dump() == first, args[0] + " " + args[2] + " differs between 1 and 4 threads");
      }
    }
  }
  return t.outcome("3 search and 3 super configs, 1 vs 4 threads");
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"opening example count", opening_example},
      {"counting automaton vs enumeration", counting_oracle},
      {"three-letter table", three_letter_table_check},
      {"exact search consistency", exact_search_consistency},
      {"monotonicity grid", monotonicity_grid},
      {"restriction to permutations", permutation_restriction},
      {"closed-form values", closed_forms},
      {"root checks", root_checks},
      {"layer-capped optimizer", cap_optimizer},
      {"overlap shift", overlap_suite},
      {"12-1 on two letters", twelve_one},
      {"11-2 on balanced words", balanced_trend},
      {"shortest superpatterns", superpatterns},
      {"thread determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
