#include "packing/construct.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "packing/roots.hpp"

namespace packing {

namespace {

Construction finish(Word word, std::string recipe, const Pattern& target, BigInt predicted) {
  Construction c;
  const int n = static_cast<int>(word.size());
  c.word = std::move(word);
  c.recipe = std::move(recipe);
  c.target.add(target);
  c.predicted_count = std::move(predicted);
  const BigInt denom = placement_count(n, static_cast<long long>(target.size()), target.blocks());
  c.predicted_density = denom == 0 ? Rational(0) : Rational(c.predicted_count, denom);
  return c;
}

std::vector<int> sizes_to_monotone(const std::vector<int>& sizes) {
  std::vector<int> w;
  for (std::size_t i = 0; i < sizes.size(); ++i) w.insert(w.end(), sizes[i], static_cast<int>(i) + 1);
  return w;
}

BigInt ceil_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if (q * den < num) ++q;
  return q;
}

}  // namespace

std::vector<int> apportion(const std::vector<Rational>& proportions, int n) {
  if (n < 0) throw std::invalid_argument("apportion needs n >= 0");
  Rational total = 0;
  for (const auto& x : proportions) {
    if (x < 0) throw std::invalid_argument("proportions must be nonnegative");
    total += x;
  }
  if (total != 1) throw std::invalid_argument("proportions must sum to 1");
  std::vector<int> sizes;
  Rational cumulative = 0;
  int previous = 0;
  for (const auto& x : proportions) {
    cumulative += x;
    const Rational target = cumulative * n;
    const int partial = static_cast<int>(
        ceil_div(boost::multiprecision::numerator(target), boost::multiprecision::denominator(target)));
    sizes.push_back(partial - previous);
    previous = partial;
  }
  return sizes;
}

std::vector<int> apportion(const std::vector<double>& proportions, int n) {
  if (n < 0) throw std::invalid_argument("apportion needs n >= 0");
  double total = 0;
  for (double x : proportions) {
    if (x < 0) throw std::invalid_argument("proportions must be nonnegative");
    total += x;
  }
  if (std::fabs(total - 1) > 1e-9) throw std::invalid_argument("proportions must sum to 1");
  std::vector<int> sizes;
  double cumulative = 0;
  int previous = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    cumulative += proportions[i];
    int partial = static_cast<int>(std::ceil(cumulative * n - 1e-9));
    partial = std::clamp(partial, previous, n);
    if (i + 1 == proportions.size()) partial = n;
    sizes.push_back(partial - previous);
    previous = partial;
  }
  return sizes;
}

std::vector<int> balanced_sizes(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("balanced sizes need 1 <= k <= n");
  auto sizes = apportion(std::vector<Rational>(k, Rational(1, k)), n);
  // Both inequalities hold by construction; a failure here is a bug.
  int partial = 0;
  for (int r = 1; r <= k; ++r) {
    partial += sizes[r - 1];
    if (abs(Rational(sizes[r - 1]) - Rational(n, k)) >= 1 || abs(Rational(partial) - Rational(r * n, k)) >= 1) {
      throw std::logic_error("balanced apportionment violates its bounds");
    }
  }
  return sizes;
}

Word balanced_monotone_word(int n, int k) { return Word(sizes_to_monotone(balanced_sizes(n, k)), k); }

Construction balanced_construction(int n, int k, const Pattern& target) {
  const auto sizes = balanced_sizes(n, k);
  Word w(sizes_to_monotone(sizes), k);
  const auto& t = target.letters();
  if (t == std::vector<int>{1, 1, 2} && target.hyphens() == std::vector<bool>{false, true}) {
    BigInt total = 0;
    int after = n;
    for (int s : sizes) {
      after -= s;
      total += BigInt(s - 1) * after;
    }
    return finish(std::move(w), "balanced monotone word", target, total);
  }
  const bool increasing = target.is_classical() && target.is_permutation() && std::is_sorted(t.begin(), t.end());
  if (!increasing) throw std::invalid_argument("balanced construction targets 11-2 or an increasing pattern");
  // Elementary symmetric polynomial e_m of the block sizes.
  const int m = static_cast<int>(t.size());
  std::vector<BigInt> e(m + 1, 0);
  e[0] = 1;
  for (int s : sizes) {
    for (int j = m; j >= 1; --j) e[j] += e[j - 1] * s;
  }
  return finish(std::move(w), "balanced monotone word", target, e[m]);
}

Construction pqr_word(int p, int q, int r, int n) {
  if (p < 1 || q < 1) throw std::invalid_argument("pqr_word needs p, q >= 1");
  if (r < 2) throw std::invalid_argument("pqr_word needs r >= 2; use nested_word for r = 1");
  if (n < p + q + r) throw std::invalid_argument("pqr_word needs n >= p + q + r");
  const int m = p + q + r;
  const auto sizes = apportion({Rational(p, m), Rational(r, m), Rational(q, m)}, n);
  std::vector<int> letters(sizes[0], 1);
  letters.insert(letters.end(), sizes[1], 2);
  letters.insert(letters.end(), sizes[2], 1);
  std::vector<int> target(p, 1);
  target.insert(target.end(), r, 2);
  target.insert(target.end(), q, 1);
  const BigInt predicted = binomial(sizes[0], p) * binomial(sizes[1], r) * binomial(sizes[2], q);
  return finish(Word(letters, 2), "1^a 2^c 1^b", Pattern::classical(target), predicted);
}

Construction nested_word(int p, int q, int depth, int n, int r) {
  if (p < 1 || q < 1 || r < 1) throw std::invalid_argument("nested_word needs p, q, r >= 1");
  if (depth < 1) throw std::invalid_argument("nested_word needs depth >= 1");
  if (n < 1) throw std::invalid_argument("nested_word needs n >= 1");
  const int s = p + q;
  const double alpha = alpha_root(s).alpha;
  const double x = 1 - s * alpha;
  std::vector<double> proportions;
  for (int i = 0; i < depth; ++i) proportions.push_back(p * alpha * std::pow(x, i));
  proportions.push_back(std::pow(x, depth));
  for (int i = depth - 1; i >= 0; --i) proportions.push_back(q * alpha * std::pow(x, i));
  const double total = std::accumulate(proportions.begin(), proportions.end(), 0.0);
  for (double& v : proportions) v /= total;
  const auto sizes = apportion(proportions, n);

  std::vector<int> letters;
  std::vector<int> left(depth + 2, 0), right(depth + 2, 0), count(depth + 2, 0);
  for (int i = 0; i < depth; ++i) {
    letters.insert(letters.end(), sizes[i], i + 1);
    left[i + 1] = sizes[i];
  }
  letters.insert(letters.end(), sizes[depth], depth + 1);
  count[depth + 1] = sizes[depth];
  for (int i = depth - 1; i >= 0; --i) {
    const int size = sizes[2 * depth - i];
    letters.insert(letters.end(), size, i + 1);
    right[i + 1] = size;
  }
  for (int v = 1; v <= depth; ++v) count[v] = left[v] + right[v];

  // An occurrence takes its 1s from the two blocks of one level u and its
  // 2s from a single higher value, all of which sit between those blocks.
  BigInt predicted = 0;
  for (int u = 1; u <= depth; ++u) {
    BigInt above = 0;
    for (int v = u + 1; v <= depth + 1; ++v) above += binomial(count[v], r);
    predicted += binomial(left[u], p) * binomial(right[u], q) * above;
  }
  std::vector<int> target(p, 1);
  target.insert(target.end(), r, 2);
  target.insert(target.end(), q, 1);
  return finish(Word(letters, depth + 1), "nested blocks, depth " + std::to_string(depth), Pattern::classical(target),
                predicted);
}

Construction layered_word(const std::vector<Rational>& proportions, const std::vector<LayerKind>& kinds, int n,
                          const std::optional<LayeredShape>& target_shape, const std::vector<LayerKind>& target_kinds) {
  if (n < 1) throw std::invalid_argument("layered_word needs n >= 1");
  if (kinds.size() != proportions.size()) throw std::invalid_argument("one layer kind per proportion");
  for (auto k : kinds) {
    if (k == LayerKind::Mixed) throw std::invalid_argument("layers must be decreasing or constant");
  }
  const auto sizes = apportion(proportions, n);
  std::vector<int> letters;
  int base = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] == 0) continue;
    if (kinds[j] == LayerKind::Constant) {
      letters.insert(letters.end(), sizes[j], base + 1);
      base += 1;
    } else {
      for (int v = sizes[j]; v >= 1; --v) letters.push_back(base + v);
      base += sizes[j];
    }
  }
  Word word(letters, std::max(base, 1));

  LayeredShape shape = target_shape ? *target_shape : LayeredShape(std::vector<int>(1, 1));
  std::vector<LayerKind> tk = target_kinds;
  if (tk.empty()) tk.assign(shape.layers(), LayerKind::Decreasing);
  if (static_cast<int>(tk.size()) != shape.layers()) throw std::invalid_argument("one target kind per target layer");
  std::vector<int> pattern;
  int value = 0;
  for (int i = 0; i < shape.layers(); ++i) {
    const int len = shape.lengths()[i];
    if (tk[i] == LayerKind::Constant) {
      pattern.insert(pattern.end(), len, value + 1);
      value += 1;
    } else if (tk[i] == LayerKind::Decreasing) {
      for (int v = len; v >= 1; --v) pattern.push_back(value + v);
      value += len;
    } else {
      throw std::invalid_argument("target layers must be decreasing or constant");
    }
  }

  // Each pattern layer lies inside one word layer of a compatible kind,
  // distinct pattern layers in distinct word layers, in order.
  const int r = shape.layers();
  std::vector<BigInt> ways(r + 1, 0);
  ways[0] = 1;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    for (int i = r; i >= 1; --i) {
      const int len = shape.lengths()[i - 1];
      const bool compatible = len == 1 || sizes[j] <= 1 || tk[i - 1] == kinds[j];
      if (compatible) ways[i] += ways[i - 1] * binomial(sizes[j], len);
    }
  }
  return finish(std::move(word), "layered word", Pattern::classical(pattern), ways[r]);
}

Word superpattern_word(int l, int m) {
  if (l < 1 || m < l) throw std::invalid_argument("superpattern_word needs m >= l >= 1");
  std::vector<int> letters;
  for (int rep = 0; rep < m - 1; ++rep) {
    for (int x = 1; x <= l; ++x) letters.push_back(x);
  }
  letters.push_back(1);
  return Word(letters, l);
}

Construction twelve_one_word(int n, int d) {
  if (d < 0 || 2 * d > n) throw std::invalid_argument("twelve_one_word needs 0 <= 2d <= n");
  std::vector<int> letters;
  for (int i = 0; i < d; ++i) {
    letters.push_back(1);
    letters.push_back(2);
  }
  letters.insert(letters.end(), n - 2 * d, 1);
  const BigInt predicted = BigInt(d) * (d - 1) / 2 + BigInt(d) * (n - 2 * d);
  return finish(Word(letters, 2), "(12)^d 1^(n-2d)", parse_pattern("12-1").pattern, predicted);
}

int best_twelve_one_d(int n) {
  int best = 1;
  long long best_value = -1;
  for (int d = 1; 2 * d <= n; ++d) {
    const long long v = static_cast<long long>(d) * (d - 1) / 2 + static_cast<long long>(d) * (n - 2 * d);
    if (v > best_value) {
      best_value = v;
      best = d;
    }
  }
  return best;
}

Construction sqrt_layer_perm(int n) {
  if (n < 1) throw std::invalid_argument("sqrt_layer_perm needs n >= 1");
  const int k = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
  const auto sizes = balanced_sizes(n, k);
  std::vector<int> letters;
  int base = 0;
  BigInt predicted = 0;
  int after = n;
  for (int s : sizes) {
    for (int v = s; v >= 1; --v) letters.push_back(base + v);
    base += s;
    after -= s;
    predicted += BigInt(s - 1) * after;
  }
  return finish(Word(letters, n), "sqrt(n) decreasing layers", parse_pattern("21-3").pattern, predicted);
}

BigInt recount(const Construction& c) {
  const Rational v = weighted_count(c.target, c.word);
  if (boost::multiprecision::denominator(v) != 1) throw std::logic_error("recount is not an integer");
  return boost::multiprecision::numerator(v);
}

}  // namespace packing
