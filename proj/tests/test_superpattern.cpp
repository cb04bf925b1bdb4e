#include <set>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "packing/construct.hpp"
#include "packing/superpattern.hpp"

using namespace packing;

namespace {

// Brute force: does some canonical word of length L contain every pattern?
// Returns the lexicographically least such word.
std::optional<std::vector<int>> brute_universal(int l, int m, int L) {
  for (auto& w : oracle::canonical_words_brute(L, L)) {
    if (is_universal(Word(w), l, m).universal) return w;
  }
  return std::nullopt;
}

int brute_shortest(int l, int m, std::vector<int>& witness) {
  for (int L = 1;; ++L) {
    if (auto w = brute_universal(l, m, L)) {
      witness = *w;
      return L;
    }
  }
}

std::string str(const Word& w) { return format_word(w); }

}  // namespace

TEST_CASE("pattern universes") {
  CHECK(pattern_universe(3, 3).patterns.size() == 13);
  CHECK(pattern_universe(2, 2).patterns.size() == 3);
  CHECK(pattern_universe(2, 3).patterns.size() == 7);
  CHECK(pattern_universe(4, 4).patterns.size() == 75);
  auto reduced = pattern_universe(7, 3);
  CHECK(reduced.l == 3);
  CHECK(reduced.requested_l == 7);
  CHECK(reduced.patterns == pattern_universe(3, 3).patterns);
  CHECK_THROWS_AS(pattern_universe(0, 2), std::invalid_argument);
}

TEST_CASE("universality checks") {
  auto r = is_universal(parse_word("123123"), 3, 3);
  CHECK_FALSE(r.universal);
  REQUIRE(r.missing.size() >= 1);
  bool has_321 = false;
  for (auto& p : r.missing) has_321 |= str(p) == "321";
  CHECK(has_321);
  CHECK(is_universal(parse_word("121"), 2, 2).universal);
  CHECK_FALSE(is_universal(parse_word("12"), 2, 2).universal);
  CHECK(is_universal(parse_word("1"), 1, 1).universal);
}

TEST_CASE("the repeated staircase is universal") {
  for (int m = 1; m <= 6; ++m) {
    for (int l = 1; l <= m; ++l) {
      auto w = superpattern_word(l, m);
      CHECK(static_cast<int>(w.size()) == l * (m - 1) + 1);
      CHECK(is_universal(w, l, m).universal);
    }
  }
}

TEST_CASE("single-length decisions agree with brute force") {
  const std::vector<std::pair<int, int>> cases{{1, 3}, {2, 2}, {2, 3}, {3, 3}, {2, 4}};
  for (auto [l, m] : cases) {
    for (int L = m; L <= l * (m - 1) + 1; ++L) {
      if (L > 8) break;
      std::uint64_t nodes = 0;
      auto got = superpattern_exists(l, m, L, {}, nodes);
      REQUIRE(got.has_value());
      CHECK_MESSAGE(*got == brute_universal(l, m, L).has_value(), "l=" << l << " m=" << m << " L=" << L);
    }
  }
}

TEST_CASE("shortest superpatterns match brute force") {
  const std::vector<std::pair<int, int>> cases{{1, 1}, {1, 4}, {2, 2}, {2, 3}, {3, 3}, {2, 4}};
  for (auto [l, m] : cases) {
    std::vector<int> witness;
    const int n = brute_shortest(l, m, witness);
    auto res = shortest_superpattern(l, m);
    CHECK(res.length == n);
    CHECK(res.lower_bound_certified);
    CHECK(res.witness.letters() == witness);
    CHECK(is_universal(res.witness, l, m).universal);
    CHECK(res.certified_lower_bound == n);
    REQUIRE_FALSE(res.log.empty());
    CHECK(res.log.back().verdict == "feasible");
    for (std::size_t i = 0; i + 1 < res.log.size(); ++i) CHECK(res.log[i].verdict == "infeasible");
  }
}

TEST_CASE("small values") {
  auto two = shortest_superpattern(2, 2);
  CHECK(two.length == 3);
  CHECK(str(two.witness) == "121");
  auto three = shortest_superpattern(3, 3);
  CHECK(three.length == 7);
  CHECK(three.lower_bound_certified);
  // l above m reduces to l = m.
  auto reduced = shortest_superpattern(5, 3);
  CHECK(reduced.l == 3);
  CHECK(reduced.length == 7);
  CHECK(reduced.witness == three.witness);
}

TEST_CASE("threads do not change the answer") {
  for (auto [l, m] : std::vector<std::pair<int, int>>{{2, 3}, {3, 3}, {2, 4}}) {
    auto one = shortest_superpattern(l, m, SearchOptions{{}, 1});
    for (unsigned t : {2u, 4u}) {
      auto many = shortest_superpattern(l, m, SearchOptions{{}, t});
      CHECK(many.length == one.length);
      CHECK(many.witness == one.witness);
      CHECK(many.log.size() == one.log.size());
      for (std::size_t i = 0; i < one.log.size(); ++i) CHECK(many.log[i].verdict == one.log[i].verdict);
    }
  }
}

TEST_CASE("a tiny budget is reported, not hidden") {
  SearchOptions opt;
  opt.budget.max_nodes = 50;
  auto res = shortest_superpattern(3, 3, opt);
  CHECK_FALSE(res.lower_bound_certified);
  CHECK(res.length == res.upper_bound);
  CHECK(res.log.back().verdict == "budget exhausted");
  CHECK(is_universal(res.witness, 3, 3).universal);
}

TEST_CASE("alphabet-limited search agrees with brute force") {
  auto brute_capped = [](int l, int m, int L, int cap) {
    for (auto& w : oracle::canonical_words_brute(L, cap)) {
      if (is_universal(Word(w), l, m).universal) return std::optional<std::vector<int>>(w);
    }
    return std::optional<std::vector<int>>();
  };
  for (auto [l, m, cap] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 3, 2}, {3, 3, 3}, {2, 4, 2}, {2, 4, 3}}) {
    SuperSearchOptions variant;
    variant.max_letters = cap;
    for (int L = m; L <= std::min(8, l * (m - 1) + 1); ++L) {
      std::uint64_t nodes = 0;
      auto got = superpattern_exists(l, m, L, {}, nodes, nullptr, variant);
      REQUIRE(got.has_value());
      CHECK_MESSAGE(*got == brute_capped(l, m, L, cap).has_value(), "l=" << l << " m=" << m << " L=" << L);
    }
    auto res = shortest_superpattern(l, m, {}, variant);
    CHECK(res.lower_bound_certified);
    CHECK(res.witness.distinct() <= cap);
    auto best = brute_capped(l, m, res.length, cap);
    REQUIRE(best.has_value());
    CHECK(res.witness.letters() == *best);
  }
  SuperSearchOptions bad;
  bad.max_letters = 2;
  CHECK_THROWS_AS(shortest_superpattern(3, 3, {}, bad), std::invalid_argument);
}

TEST_CASE("certificates survive a reversed shard order") {
  for (auto [l, m] : std::vector<std::pair<int, int>>{{3, 3}, {2, 4}, {3, 4}}) {
    SuperSearchOptions rev;
    rev.reverse_shards = true;
    auto a = shortest_superpattern(l, m);
    auto b = shortest_superpattern(l, m, {}, rev);
    CHECK(a.length == b.length);
    CHECK(a.witness == b.witness);
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
      CHECK(a.log[i].verdict == b.log[i].verdict);
      if (a.log[i].verdict == "infeasible") CHECK(a.log[i].nodes == b.log[i].nodes);
    }
  }
}
