#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "packing/density.hpp"

using namespace packing;

namespace {
Pattern N(std::string_view s) { return parse_pattern_notation(s).pattern; }
const double kSqrt3 = std::sqrt(3.0);

std::vector<std::vector<int>> compositions(int m) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << (m - 1)); ++mask) {
    std::vector<int> a;
    int len = 1;
    for (int g = 0; g < m - 1; ++g) {
      if ((mask >> g) & 1) {
        a.push_back(len);
        len = 1;
      } else {
        ++len;
      }
    }
    a.push_back(len);
    out.push_back(a);
  }
  return out;
}

std::vector<int> monotone(const std::vector<int>& a) {
  std::vector<int> w;
  for (std::size_t i = 0; i < a.size(); ++i) w.insert(w.end(), a[i], static_cast<int>(i) + 1);
  return w;
}

// Least s such that some canonical word of length m + s has both length-m
// windows flattening to w; brute force over all words.
int overlap_brute(const std::vector<int>& w) {
  const int m = static_cast<int>(w.size());
  for (int s = 1; s <= m; ++s) {
    for (auto& x : oracle::canonical_words_brute(m + s, m + s)) {
      std::vector<int> head(x.begin(), x.begin() + m), tail(x.begin() + s, x.end());
      if (flatten(head) == w && flatten(tail) == w) return s;
    }
  }
  return m;
}
}  // namespace

TEST_CASE("k1 root and density") {
  const double a = k1_root(2);
  CHECK(std::fabs(a - (kSqrt3 - 1) / 2) < 1e-14);
  for (int k = 2; k <= 8; ++k) {
    const double r = k1_root(k);
    CHECK(r > 0);
    CHECK(r < 1);
    CHECK(std::fabs(k * std::pow(r, k + 1) - (k + 1) * r + 1) < 1e-12);
  }
  auto d = k1_density(2);
  CHECK(std::fabs(d.value - (2 * kSqrt3 - 3)) < 1e-12);
  CHECK(d.error_bound > 0);
  CHECK(k1_density(1).exact == Rational(1));
}

TEST_CASE("alpha root") {
  for (int s = 2; s <= 8; ++s) {
    auto r = alpha_root(s);
    CHECK(r.alpha > 0);
    CHECK(r.alpha <= 1.0 / s);
    CHECK(r.residual <= 1e-14);
    CHECK(std::fabs(r.a - k1_root(s)) < 1e-10);
    if (s >= 3) {
      const double x0 = 1.0 / (s + 1) - std::pow(s + 1.0, -(s + 2));
      CHECK(std::fabs(r.alpha - x0) <= std::pow(4.0, -6));
    }
  }
  CHECK(std::fabs(1 - 2 * alpha_root(2).alpha - (kSqrt3 - 1) / 2) < 1e-12);
  CHECK_THROWS_AS(alpha_root(1), std::invalid_argument);
}

TEST_CASE("simple layered closed form") {
  CHECK(simple_layered_density(LayeredShape({2, 2})).exact == Rational(3, 8));
  CHECK(simple_layered_density(LayeredShape({2, 2, 2})).exact == Rational(720 * 8, 46656));
  CHECK_THROWS_AS(simple_layered_density(LayeredShape({1, 2})), NoClosedForm);
  CHECK(simple_criterion(LayeredShape({2, 2, 2})));
  CHECK_FALSE(simple_criterion(LayeredShape({2, 2, 2, 2})));
}

TEST_CASE("layer cap optimizer on small caps") {
  // 3 p^2 (1 - p) peaks at p = 2/3.
  auto v = layered_density_cap(LayeredShape({2, 1}), 2);
  CHECK(std::fabs(v.value - 4.0 / 9) < 1e-9);
  REQUIRE(v.proportions.size() == 2);
  CHECK(std::fabs(v.proportions[0] - 2.0 / 3) < 1e-6);
  CHECK(std::fabs(layered_density_cap(LayeredShape({1, 2}), 2).value - 4.0 / 9) < 1e-9);
  CHECK(std::fabs(layered_density_cap(LayeredShape({2, 2}), 2).value - 0.375) < 1e-9);
  CHECK_THROWS_AS(layered_density_cap(LayeredShape({2, 2, 2}), 2), std::invalid_argument);

  double grid_best = 0;
  for (int i = 0; i <= 100000; ++i) {
    const double p = i / 100000.0;
    grid_best = std::max(grid_best, 3 * p * p * (1 - p));
  }
  CHECK(v.value >= grid_best - 1e-12);
}

TEST_CASE("no sampled point beats the reported maximum") {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> expo(1.0);
  for (auto shape : std::vector<std::vector<int>>{{2, 1}, {1, 2, 1}, {3, 2}}) {
    const int ell = 5;
    const double best = layered_density_cap(LayeredShape(shape), ell).value;
    LayerPolynomial f(shape, ell);
    double sampled = 0;
    for (int t = 0; t < 20000; ++t) {
      std::vector<double> p(ell);
      double s = 0;
      for (double& x : p) s += (x = expo(rng));
      for (double& x : p) x /= s;
      sampled = std::max(sampled, f.value(p));
    }
    CHECK(sampled <= best + 1e-12);
  }
}

TEST_CASE("layer polynomial gradient matches finite differences") {
  LayerPolynomial f({2, 1, 3}, 6);
  std::vector<double> p{0.1, 0.2, 0.15, 0.25, 0.2, 0.1}, g;
  f.gradient(p, g);
  for (int j = 0; j < 6; ++j) {
    auto up = p, down = p;
    up[j] += 1e-6;
    down[j] -= 1e-6;
    CHECK(std::fabs((f.value(up) - f.value(down)) / 2e-6 - g[j]) < 1e-6);
  }
}

TEST_CASE("cap sequence is nondecreasing and reaches the simple value") {
  for (auto shape : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}}) {
    const LayeredShape s(shape);
    const double target = to_double(*simple_layered_density(s).exact);
    double prev = 0;
    for (int ell = s.layers(); ell <= s.layers() + 8; ++ell) {
      const double v = layered_density_cap(s, ell).value;
      CHECK(v >= prev - 1e-9);
      CHECK(v <= target + 1e-9);
      prev = v;
    }
    CHECK(prev >= target - 1e-6);
  }
  for (auto shape : std::vector<std::vector<int>>{{2, 1}, {3, 1}, {1, 2, 1}}) {
    double prev = 0;
    for (int ell = static_cast<int>(shape.size()); ell <= static_cast<int>(shape.size()) + 8; ++ell) {
      const double v = layered_density_cap(LayeredShape(shape), ell).value;
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("cap optimizer approaches the k1 root density") {
  CHECK(std::fabs(layered_density_cap(LayeredShape({3, 1}), 20).value - k1_density(3).value) < 1e-6);
  CHECK(std::fabs(layered_density_cap(LayeredShape({2, 1}), 20).value - k1_density(2).value) < 1e-6);
}

TEST_CASE("two-block closed form") {
  CHECK(r_s_density(2, 2).exact == Rational(3, 8));
  CHECK(r_s_density(2, 3).exact == Rational(216, 625));
  CHECK(r_s_density(3, 2).exact == Rational(216, 625));
  CHECK(std::fabs(r_s_density(1, 3).value - k1_density(3).value) < 1e-15);
  CHECK(r_s_density(1, 1).exact == Rational(1));
}

TEST_CASE("1^p 2^r 1^q") {
  CHECK(std::fabs(pqr_density(1, 1, 1).value - (kSqrt3 - 1.5)) < 1e-10);
  CHECK(pqr_density(1, 1, 2).exact == Rational(3, 16));
  CHECK(pqr_density(2, 2, 2).exact == Rational(90 * 64, 46656));
  for (int p = 1; p <= 4; ++p) {
    for (int q = 1; q <= 4; ++q) {
      CHECK(std::fabs(pqr_density(p, q, 1).value - pqr_density_factored(p, q).value) < 1e-10);
      CHECK(std::fabs(pqr_density(p, q, 1).value - pqr_density(q, p, 1).value) < 1e-12);
      CHECK(pqr_density(p, q, 3).exact == pqr_density(q, p, 3).exact);
    }
  }
  CHECK(std::fabs(pqr_density(0, 2, 1).value - k1_density(2).value) < 1e-15);
  CHECK(pqr_density(2, 0, 2).exact == Rational(3, 8));
}

TEST_CASE("layered word reduction") {
  CHECK(layered_word_density(N("432155")).exact == Rational(15 * 256 * 4, 46656));
  CHECK(std::fabs(layered_word_density(N("3214")).value - k1_density(3).value) < 1e-15);
  CHECK(layered_word_density(N("2143")).exact == Rational(3, 8));
  for (auto s : {"1123", "1233", "1243"}) CHECK(density_of(N(s)).exact == Rational(3, 8));
  CHECK_THROWS_AS(layered_word_density(N("221133")), NoClosedForm);
  CHECK_THROWS_AS(layered_word_density(N("312")), NoClosedForm);
}

TEST_CASE("self-overlap shift: formula against overlap search") {
  CHECK(m_overlap(N("112_g")).formula == 2);
  CHECK(m_overlap(N("123_g")).formula == 1);
  CHECK(m_overlap(N("1432_g")).formula == 3);
  int checked = 0;
  for (int m = 2; m <= 8; ++m) {
    for (auto& a : compositions(m)) {
      if (a.size() < 2) continue;
      auto o = m_overlap(Pattern::subword(monotone(a)));
      CHECK(o.formula == o.oracle);
      CHECK(overlap_oracle(LayeredShape(a).permutation()) == o.oracle);
      ++checked;
    }
  }
  CHECK(checked == 247);
  for (int m = 2; m <= 4; ++m) {
    for (auto& a : compositions(m)) {
      CHECK(overlap_oracle(monotone(a)) == overlap_brute(monotone(a)));
    }
  }
  CHECK_THROWS_AS(m_overlap(N("111_g")), std::invalid_argument);
}

TEST_CASE("hyphen-free layered densities") {
  CHECK(gen_layered_density(N("112_g")).exact == Rational(1, 2));
  CHECK(gen_layered_density(N("123_g")).exact == Rational(1));
  CHECK(gen_layered_density(N("132_g")).exact == Rational(1, 2));
  CHECK(gen_layered_density(N("21_g")).exact == Rational(1));
  for (int m = 3; m <= 8; ++m) {
    std::vector<int> ones(m - 1, 1);
    ones.push_back(2);
    CHECK(gen_layered_density(Pattern::subword(ones)).exact == Rational(1, m - 1));
    std::vector<int> pi2{1};
    for (int v = m; v >= 2; --v) pi2.push_back(v);
    CHECK(gen_layered_density(Pattern::subword(pi2)).exact == Rational(1, m - 1));
  }
  CHECK_THROWS_AS(gen_layered_density(N("231_g")), NoClosedForm);
}

TEST_CASE("three-letter table") {
  auto rows = three_letter_table();
  REQUIRE(rows.size() == 5);
  const std::vector<double> expected{1, 2 * kSqrt3 - 3, kSqrt3 - 1.5, 1, 2 * kSqrt3 - 3};
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(std::fabs(rows[i].density.value - expected[i]) < 1e-10);
  CHECK(std::round(rows[1].density.value * 1e4) / 1e4 == doctest::Approx(0.4641).epsilon(1e-12));
}

TEST_CASE("density dispatch") {
  CHECK(density_of(N("231")).provenance.find("via symmetric") != std::string::npos);
  CHECK(std::fabs(density_of(N("231")).value - (2 * kSqrt3 - 3)) < 1e-12);
  CHECK(density_of(N("11-2")).exact == Rational(1));
  CHECK(density_of(N("21-3")).exact == Rational(1));
  CHECK(density_of(N("1-23")).exact == Rational(1));
  CHECK_THROWS_AS(density_of(N("12-1")), NoClosedForm);
  CHECK_THROWS_AS(density_of(N("1342")), NoClosedForm);
  CHECK_THROWS_AS(density_of(N("132"), "bogus"), std::invalid_argument);
  CHECK_THROWS_AS(density_of(N("121"), "rs"), NoClosedForm);
  CHECK(density_of(N("1122"), "rs").exact == Rational(3, 8));
  CHECK(density_of(N("1122"), "cap", 4).cap == 4);
  for (auto s : {"111", "112", "121", "123", "132", "1122", "2143", "1212_g", "11-2"}) {
    try {
      auto v = density_of(N(s));
      CHECK(v.value >= 0);
      CHECK(v.value <= 1);
    } catch (const NoClosedForm&) {
    }
  }
}
