#include "packing/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

namespace packing {

namespace {

// Root-based values: the root is bracketed to 1e-14 and every formula below
// has derivative of modest size in it.
constexpr double kRootError = 1e-12;
constexpr double kCapError = 1e-9;

Rational pow_ratio(int base, int exponent) { return Rational(power(BigInt(base), exponent)); }

DensityValue one(std::string provenance) { return DensityValue::rational(1, std::move(provenance)); }

std::string shape_text(const LayeredShape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.lengths().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.lengths()[i]);
  }
  return out + "]";
}

// Runs of equal letters as (letter, length).
std::vector<std::pair<int, int>> runs(const std::vector<int>& letters) {
  std::vector<std::pair<int, int>> out;
  for (int x : letters) {
    if (!out.empty() && out.back().first == x) ++out.back().second;
    else out.emplace_back(x, 1);
  }
  return out;
}

// 1^p 2^r 1^q with p, q, r >= 1.
std::optional<std::array<int, 3>> pqr_form(const Pattern& p) {
  if (p.distinct() != 2) return std::nullopt;
  auto r = runs(p.letters());
  if (r.size() == 3 && r[0].first == 1 && r[1].first == 2 && r[2].first == 1) {
    return std::array<int, 3>{r[0].second, r[2].second, r[1].second};
  }
  return std::nullopt;
}

}  // namespace

DensityValue DensityValue::rational(Rational q, std::string provenance) {
  DensityValue v;
  v.value = to_double(q);
  v.exact = std::move(q);
  v.provenance = std::move(provenance);
  return v;
}

DensityValue DensityValue::approximate(double value, double error_bound, std::string provenance) {
  DensityValue v;
  v.value = value;
  v.error_bound = error_bound;
  v.provenance = std::move(provenance);
  return v;
}

bool simple_criterion(const LayeredShape& shape) {
  const int lo = shape.min_length();
  if (lo >= 62) return true;
  return (1LL << lo) >= static_cast<long long>(shape.layers()) + 1;
}

DensityValue simple_layered_density(const LayeredShape& shape) {
  if (!simple_criterion(shape)) {
    throw NoClosedForm("criterion not met: log2(r+1) > min layer length for " + shape_text(shape));
  }
  const int m = shape.total();
  Rational v(factorial(m), power(BigInt(m), m));
  for (int len : shape.lengths()) v *= Rational(power(BigInt(len), len), factorial(len));
  return DensityValue::rational(v, "simple layered closed form " + shape_text(shape));
}

DensityValue layered_density_cap(const LayeredShape& shape, int ell, const SimplexMaxOptions& options) {
  auto best = maximize_layer_polynomial(shape.lengths(), ell, options);
  auto v = DensityValue::approximate(best.value, kCapError, "layer-cap optimizer " + shape_text(shape));
  v.cap = ell;
  v.proportions = best.point;
  return v;
}

DensityValue k1_density(int k) {
  if (k < 1) throw std::invalid_argument("k1_density needs k >= 1");
  if (k == 1) return one("increasing pattern");
  const double a = k1_root(k);
  auto v = DensityValue::approximate(k * a * std::pow(1 - a, k - 1), kRootError,
                                     "root of k a^(k+1) - (k+1) a + 1 for [" + std::to_string(k) + ",1]");
  v.root_a = a;
  return v;
}

DensityValue r_s_density(int r, int s) {
  if (r < 1 || s < 1) throw std::invalid_argument("r_s_density needs r, s >= 1");
  if (r == 1 && s == 1) return one("increasing pattern");
  if (r == 1) return k1_density(s);
  if (s == 1) return k1_density(r);
  Rational v = Rational(binomial(r + s, r)) * pow_ratio(r, r) * pow_ratio(s, s) / pow_ratio(r + s, r + s);
  return DensityValue::rational(v, "two-block binomial closed form");
}

DensityValue pqr_density(int p, int q, int r) {
  if (p < 0 || q < 0 || r < 1 || p + q < 1) throw std::invalid_argument("pqr_density needs p, q >= 0, p + q >= 1, r >= 1");
  if (p == 0 || q == 0) return r_s_density(p + q, r);
  const int s = p + q;
  if (r >= 2) {
    const int m = s + r;
    Rational v(factorial(m), factorial(p) * factorial(q) * factorial(r));
    v *= pow_ratio(p, p) * pow_ratio(q, q) * pow_ratio(r, r) / pow_ratio(m, m);
    return DensityValue::rational(v, "1^p 2^r 1^q multinomial closed form");
  }
  const AlphaRoot root = alpha_root(s);
  const double coefficient = to_double(Rational(binomial(s, p)) * pow_ratio(p, p) * pow_ratio(q, q));
  auto v = DensityValue::approximate(coefficient * (1 - s * root.alpha) * std::pow(root.alpha, s - 1), kRootError,
                                     "1^p 2 1^q nested blocks via alpha root of (1-sx)^(s+1) = 1-(s+1)x");
  v.alpha = root.alpha;
  v.root_a = root.a;
  return v;
}

DensityValue pqr_density_factored(int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("pqr_density_factored needs p, q >= 1");
  const int s = p + q;
  const Rational factor = Rational(binomial(s, p)) * pow_ratio(p, p) * pow_ratio(q, q) / pow_ratio(s, s);
  auto inner = k1_density(s);
  auto v = DensityValue::approximate(to_double(factor) * inner.value, kRootError,
                                     "binomial split of [" + std::to_string(s) + ",1]");
  v.root_a = inner.root_a;
  return v;
}

DensityValue layered_permutation_density(const LayeredShape& shape) {
  const auto& len = shape.lengths();
  if (shape.layers() == 1) return one("single layer");
  if (std::all_of(len.begin(), len.end(), [](int x) { return x == 1; })) return one("increasing pattern");
  if (simple_criterion(shape)) return simple_layered_density(shape);
  if (shape.layers() == 2 && (len[0] == 1 || len[1] == 1)) return k1_density(len[0] == 1 ? len[1] : len[0]);
  if (len == std::vector<int>{1, 1, 2} || len == std::vector<int>{2, 1, 1}) {
    return DensityValue::rational(Rational(3, 8), "cited value for layer shapes [1,1,2] and [2,1,1]");
  }
  throw NoClosedForm("no closed form for layered shape " + shape_text(shape));
}

DensityValue layered_word_density(const Pattern& p) {
  if (!p.is_classical()) throw std::invalid_argument("layered_word_density needs a classical pattern");
  auto d = layered_decompose(p);
  if (!d) throw NoClosedForm("pattern " + format_pattern_notation(p) + " is not layered");
  if (d->has_mixed()) throw NoClosedForm("a layer of " + format_pattern_notation(p) + " is neither decreasing nor constant");

  DensityValue v;
  if (p.is_permutation()) {
    v = layered_permutation_density(d->shape);
  } else if (p.is_nondecreasing()) {
    // Monotone words pack exactly like the layered permutation whose layers
    // have the block lengths.
    v = layered_permutation_density(d->shape);
    v.provenance = "monotone word as layered permutation " + shape_text(d->shape) + ": " + v.provenance;
    return v;
  } else if (simple_criterion(d->shape)) {
    v = simple_layered_density(d->shape);
  } else {
    throw NoClosedForm("layered word " + format_pattern_notation(p) + " has shape " + shape_text(d->shape) +
                       " outside the simplicity criterion");
  }
  v.provenance = "layered word as layered permutation " + shape_text(d->shape) + ": " + v.provenance;
  return v;
}

int overlap_formula(const std::vector<int>& a) {
  const int l = static_cast<int>(a.size());
  if (l < 2) throw std::invalid_argument("overlap_formula needs at least two blocks");
  // 1-based access.
  auto A = [&](int i) { return a[i - 1]; };
  for (int j = 1; j <= l - 2; ++j) {
    bool ok = A(1) <= A(j + 1) && A(l - j) >= A(l);
    for (int i = 2; ok && i <= l - j - 1; ++i) ok = A(i) == A(i + j);
    if (ok) {
      int sum = 0;
      for (int i = 2; i <= j + 1; ++i) sum += A(i);
      return sum;
    }
  }
  int sum = std::max(A(1), A(l));
  for (int i = 2; i <= l - 1; ++i) sum += A(i);
  return sum;
}

int overlap_oracle(const std::vector<int>& letters) {
  const int m = static_cast<int>(letters.size());
  if (m == 0) throw std::invalid_argument("overlap_oracle needs a nonempty pattern");
  for (int s = 1; s <= m; ++s) {
    const int n = m + s;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<std::pair<int, int>> less;
    for (int offset : {0, s}) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (letters[i] == letters[j]) parent[find(offset + i)] = find(offset + j);
          else if (letters[i] < letters[j]) less.emplace_back(offset + i, offset + j);
        }
      }
    }
    std::vector<std::vector<int>> out(n);
    std::vector<int> indegree(n, 0);
    bool feasible = true;
    for (auto [x, y] : less) {
      const int a = find(x), b = find(y);
      if (a == b) {
        feasible = false;
        break;
      }
      out[a].push_back(b);
      ++indegree[b];
    }
    if (feasible) {
      std::vector<int> queue;
      int classes = 0;
      for (int v = 0; v < n; ++v) {
        if (find(v) != v) continue;
        ++classes;
        if (indegree[v] == 0) queue.push_back(v);
      }
      int seen = 0;
      while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        ++seen;
        for (int w : out[v]) {
          if (--indegree[w] == 0) queue.push_back(w);
        }
      }
      feasible = seen == classes;
    }
    if (feasible) return s;
  }
  return m;  // unreachable: at s = m the two windows are disjoint
}

OverlapShift m_overlap(const Pattern& p) {
  if (!p.is_subword()) throw std::invalid_argument("m_overlap needs a pattern without hyphens");
  if (p.is_constant()) throw std::invalid_argument("m_overlap rejects constant patterns");
  auto d = layered_decompose(p);
  if (!d || d->shape.layers() < 2) {
    throw NoClosedForm("pattern " + format_pattern_notation(p) + " is not layered with at least two layers");
  }
  std::vector<int> monotone;
  for (int i = 0; i < d->shape.layers(); ++i) monotone.insert(monotone.end(), d->shape.lengths()[i], i + 1);
  OverlapShift out;
  out.formula = overlap_formula(d->shape.lengths());
  out.oracle = overlap_oracle(monotone);
  out.oracle_direct = overlap_oracle(p.letters());
  return out;
}

DensityValue gen_layered_density(const Pattern& p) {
  if (!p.is_subword()) throw std::invalid_argument("gen_layered_density needs a pattern without hyphens");
  if (p.is_constant()) return one("constant pattern");
  auto d = layered_decompose(p);
  if (!d) throw NoClosedForm("pattern " + format_pattern_notation(p) + " is not layered");
  if (!p.is_permutation() && !p.is_nondecreasing()) {
    throw NoClosedForm("hyphen-free layered word " + format_pattern_notation(p) +
                       " is neither monotone nor a permutation");
  }
  if (d->shape.layers() == 1) return one("single decreasing layer");
  const OverlapShift shift = m_overlap(p);
  std::string provenance = "self-overlap shift M = " + std::to_string(shift.oracle);
  if (!shift.agree()) {
    provenance += " (case formula gives " + std::to_string(shift.formula) + "; overlap search used)";
  }
  auto v = DensityValue::rational(Rational(1, shift.oracle), provenance);
  v.shift = shift.oracle;
  return v;
}

std::vector<TableRow> three_letter_table() {
  std::vector<TableRow> rows;
  rows.push_back({"111", "1", density_of(Pattern::classical(std::vector<int>{1, 1, 1}))});
  rows.push_back({"112", "2*sqrt(3)-3", density_of(Pattern::classical(std::vector<int>{1, 1, 2}))});
  rows.push_back({"121", "(2*sqrt(3)-3)/2", density_of(Pattern::classical(std::vector<int>{1, 2, 1}))});
  rows.push_back({"123", "1", density_of(Pattern::classical(std::vector<int>{1, 2, 3}))});
  rows.push_back({"132", "2*sqrt(3)-3", density_of(Pattern::classical(std::vector<int>{1, 3, 2}))});
  return rows;
}

std::vector<std::string> density_routes() { return {"auto", "simple", "k1", "rs", "pqr", "layered", "overlap", "cap"}; }

namespace {

std::optional<LayeredShape> permutation_shape(const Pattern& p) {
  if (!p.is_classical()) return std::nullopt;
  if (p.is_nondecreasing()) return LayeredShape(blocks(p));
  if (!p.is_permutation()) return std::nullopt;
  auto d = layered_decompose(p);
  if (!d) return std::nullopt;
  return d->shape;
}

std::optional<DensityValue> try_route(const Pattern& p, const std::string& route, int cap,
                                      const SimplexMaxOptions& options) {
  auto shape = permutation_shape(p);
  if (route == "simple") {
    if (shape) return simple_layered_density(*shape);
  } else if (route == "k1") {
    if (shape && shape->layers() == 2) {
      const auto& len = shape->lengths();
      if (len[1] == 1) return k1_density(len[0]);
      if (len[0] == 1) return k1_density(len[1]);
    }
  } else if (route == "rs") {
    if (shape && shape->layers() == 2) return r_s_density(shape->lengths()[0], shape->lengths()[1]);
  } else if (route == "pqr") {
    if (p.is_classical()) {
      if (auto f = pqr_form(p)) return pqr_density((*f)[0], (*f)[1], (*f)[2]);
    }
  } else if (route == "layered") {
    if (p.is_classical() && layered_decompose(p)) return layered_word_density(p);
  } else if (route == "overlap") {
    if (p.is_subword()) return gen_layered_density(p);
  } else if (route == "cap") {
    if (shape) return layered_density_cap(*shape, cap, options);
  } else {
    throw std::invalid_argument("unknown density route '" + route + "'");
  }
  return std::nullopt;
}

bool in_class_of(const Pattern& p, std::string_view representative) {
  const Pattern rep = parse_pattern(representative).pattern;
  if (rep.size() != p.size()) return false;
  for (const auto& q : symmetry_class(rep)) {
    if (q == p) return true;
  }
  return false;
}

std::optional<DensityValue> auto_route(const Pattern& p) {
  if (p.is_constant()) return one("constant pattern");
  if (p.is_subword()) {
    try {
      return gen_layered_density(p);
    } catch (const NoClosedForm&) {
      return std::nullopt;
    }
  }
  if (!p.is_classical()) {
    const bool increasing = std::is_sorted(p.letters().begin(), p.letters().end()) && p.is_permutation();
    if (increasing) return one("hyphenated increasing pattern");
    for (auto rep : {"11-2", "12-3", "21-3"}) {
      if (in_class_of(p, rep)) return one(std::string("one-hyphen family of ") + rep);
    }
    return std::nullopt;
  }
  if (auto shape = permutation_shape(p)) {
    try {
      auto v = layered_permutation_density(*shape);
      if (p.is_nondecreasing() && !p.is_permutation()) {
        v.provenance = "monotone word as layered permutation " + shape_text(*shape) + ": " + v.provenance;
      }
      return v;
    } catch (const NoClosedForm&) {
    }
  }
  if (auto f = pqr_form(p)) return pqr_density((*f)[0], (*f)[1], (*f)[2]);
  if (layered_decompose(p)) {
    try {
      return layered_word_density(p);
    } catch (const NoClosedForm&) {
    }
  }
  return std::nullopt;
}

}  // namespace

DensityValue density_of(const Pattern& p, const std::string& route, int cap, const SimplexMaxOptions& options) {
  if (route != "auto") {
    if (auto v = try_route(p, route, cap, options)) return *v;
    throw NoClosedForm("route '" + route + "' does not apply to " + format_pattern_notation(p));
  }
  if (auto v = auto_route(p)) return *v;
  const bool with_inverse = p.is_classical() && p.is_permutation();
  for (const auto& q : symmetry_class(p, with_inverse)) {
    if (q == p) continue;
    if (auto v = auto_route(q)) {
      v->provenance += " (via symmetric pattern " + format_pattern_notation(q) + ")";
      return *v;
    }
  }
  throw NoClosedForm("no closed form for " + format_pattern_notation(p));
}

}  // namespace packing
