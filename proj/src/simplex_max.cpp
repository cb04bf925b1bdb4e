#include "packing/simplex_max.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "packing/numeric.hpp"

namespace packing {

namespace {

double ipow(double x, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0, theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - theta);
  return out;
}

void normalise(std::vector<double>& p) {
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
}

class Refiner {
 public:
  explicit Refiner(const LayerPolynomial& f) : f_(f), grad_(f.dimension()) {}

  double run(std::vector<double>& p) {
    gradient_ascent(p);
    double best = -1;
    for (int round = 0; round <= f_.dimension(); ++round) {
      baum_eagon(p);
      std::vector<double> best_p = p;
      best = std::max(best, f_.value(p));
      std::size_t last_support = 0;
      for (double threshold : {1e-5, 1e-8, 1e-11}) {
        const auto support = static_cast<std::size_t>(
            std::count_if(p.begin(), p.end(), [&](double x) { return x > threshold; }));
        if (support == last_support) continue;
        last_support = support;
        std::vector<double> q = p;
        const double v = newton(q, threshold);
        if (v > best) {
          best = v;
          best_p = q;
        }
      }
      p = best_p;
      if (!reactivate(p)) break;
    }
    return best;
  }

 private:
  void gradient_ascent(std::vector<double>& p) {
    double value = f_.value(p);
    double step = 1;
    for (int it = 0; it < 300; ++it) {
      f_.gradient(p, grad_);
      bool moved = false;
      for (int tries = 0; tries < 30; ++tries) {
        std::vector<double> q(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) q[j] = p[j] + step * grad_[j];
        q = project_to_simplex(q);
        const double v = f_.value(q);
        if (v > value) {
          p = std::move(q);
          value = v;
          step *= 1.5;
          moved = true;
          break;
        }
        step /= 2;
      }
      if (!moved) break;
    }
  }

  // A vanished layer contributes nothing wherever it sits, so it may be
  // moved to any gap between the used layers. If at some gap its partial
  // derivative exceeds the multiplier sum_j p_j dF/dp_j, the KKT conditions
  // fail there: move it and put mass back on it.
  bool reactivate(std::vector<double>& p) {
    std::vector<double> used;
    for (double x : p) {
      if (x >= 1e-12) used.push_back(x);
    }
    const std::size_t zeros = p.size() - used.size();
    if (zeros == 0) return false;
    for (std::size_t gap = 0; gap <= used.size(); ++gap) {
      std::vector<double> q(used.begin(), used.begin() + gap);
      q.push_back(0);
      q.insert(q.end(), used.begin() + gap, used.end());
      q.resize(p.size(), 0.0);
      f_.gradient(q, grad_);
      double lambda = 0;
      for (std::size_t j = 0; j < q.size(); ++j) lambda += q[j] * grad_[j];
      if (grad_[gap] > lambda * (1 + 1e-13)) {
        q[gap] = 1e-3 / static_cast<double>(q.size());
        normalise(q);
        p = q;
        return true;
      }
    }
    return false;
  }

  // p_j <- p_j dF/dp_j / sum_k p_k dF/dp_k never decreases F because F has
  // nonnegative coefficients.
  void baum_eagon(std::vector<double>& p) {
    double value = f_.value(p);
    for (int it = 0; it < 500; ++it) {
      f_.gradient(p, grad_);
      double total = 0;
      for (std::size_t j = 0; j < p.size(); ++j) total += p[j] * grad_[j];
      if (total <= 0) return;
      double change = 0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double next = p[j] * grad_[j] / total;
        change = std::max(change, std::fabs(next - p[j]));
        p[j] = next;
      }
      const double v = f_.value(p);
      if (change < 1e-14 || v - value < 1e-17) return;
      value = v;
    }
  }

  // Newton iteration on grad F = lambda * 1, sum p = 1 over the coordinates
  // above `threshold`; the others are pinned at zero. The Hessian comes
  // from central differences of the exact gradient.
  double newton(std::vector<double>& p, double threshold) {
    std::vector<int> support;
    for (int j = 0; j < f_.dimension(); ++j) {
      if (p[j] > threshold) support.push_back(j);
    }
    for (int j = 0; j < f_.dimension(); ++j) {
      if (p[j] <= threshold) p[j] = 0;
    }
    normalise(p);
    double value = f_.value(p);
    const int d = static_cast<int>(support.size());
    if (d < 2) return value;

    std::vector<double> up(p.size()), down(p.size()), shifted;
    const double h = 1e-5;
    int stalled = 0;
    for (int it = 0; it < 60; ++it) {
      const double before = value;
      f_.gradient(p, grad_);
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + 1, d + 1);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
      for (int a = 0; a < d; ++a) {
        shifted = p;
        shifted[support[a]] += h;
        f_.gradient(shifted, up);
        shifted[support[a]] -= 2 * h;
        f_.gradient(shifted, down);
        for (int b = 0; b < d; ++b) kkt(b, a) = (up[support[b]] - down[support[b]]) / (2 * h);
        rhs(a) = -grad_[support[a]];
      }
      kkt.topLeftCorner(d, d) = (kkt.topLeftCorner(d, d) + kkt.topLeftCorner(d, d).transpose()).eval() / 2;
      for (int a = 0; a < d; ++a) {
        kkt(a, d) = -1;
        kkt(d, a) = 1;
      }
      const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
      if (!sol.allFinite()) break;

      double t = 1;
      bool accepted = false;
      std::vector<double> q = p;
      for (int tries = 0; tries < 40; ++tries) {
        bool positive = true;
        for (int a = 0; a < d; ++a) {
          q[support[a]] = p[support[a]] + t * sol(a);
          if (q[support[a]] <= 0) positive = false;
        }
        if (positive) {
          normalise(q);
          const double v = f_.value(q);
          if (v >= value - 1e-16) {
            accepted = true;
            value = std::max(value, v);
            break;
          }
        }
        t /= 2;
      }
      if (!accepted) break;
      double size = 0;
      for (int a = 0; a < d; ++a) size = std::max(size, std::fabs(q[support[a]] - p[support[a]]));
      p = q;
      if (size < 1e-14) break;
      stalled = value > before ? 0 : stalled + 1;
      if (stalled >= 3) break;
    }
    return f_.value(p);
  }

  const LayerPolynomial& f_;
  std::vector<double> grad_;
};

}  // namespace

LayerPolynomial::LayerPolynomial(std::vector<int> lengths, int ell) : lengths_(std::move(lengths)), ell_(ell) {
  if (lengths_.empty()) throw std::invalid_argument("empty layer shape");
  if (ell < static_cast<int>(lengths_.size())) throw std::invalid_argument("cap ell must be at least the layer count");
  int m = 0;
  BigInt denominator = 1;
  for (int len : lengths_) {
    if (len < 1) throw std::invalid_argument("layer lengths must be positive");
    m += len;
    denominator *= factorial(len);
  }
  coefficient_ = to_double(Rational(factorial(m), denominator));
}

double LayerPolynomial::value(const std::vector<double>& p) const {
  const int r = static_cast<int>(lengths_.size());
  std::vector<double> f(r + 1, 0.0);
  f[0] = 1;
  for (int j = 0; j < ell_; ++j) {
    for (int i = r; i >= 1; --i) f[i] += f[i - 1] * ipow(p[j], lengths_[i - 1]);
  }
  return coefficient_ * f[r];
}

double LayerPolynomial::gradient(const std::vector<double>& p, std::vector<double>& grad) const {
  const int r = static_cast<int>(lengths_.size());
  // fwd[j][i]: pattern layers 1..i placed in parts 1..j; bwd[j][i]: pattern
  // layers i+1..r placed in parts j+1..ell.
  std::vector<std::vector<double>> fwd(ell_ + 1, std::vector<double>(r + 1, 0.0));
  std::vector<std::vector<double>> bwd(ell_ + 1, std::vector<double>(r + 1, 0.0));
  fwd[0][0] = 1;
  for (int j = 1; j <= ell_; ++j) {
    fwd[j] = fwd[j - 1];
    for (int i = 1; i <= r; ++i) fwd[j][i] += fwd[j - 1][i - 1] * ipow(p[j - 1], lengths_[i - 1]);
  }
  bwd[ell_][r] = 1;
  for (int j = ell_ - 1; j >= 0; --j) {
    bwd[j] = bwd[j + 1];
    for (int i = 0; i < r; ++i) bwd[j][i] += ipow(p[j], lengths_[i]) * bwd[j + 1][i + 1];
  }
  grad.assign(ell_, 0.0);
  for (int j = 1; j <= ell_; ++j) {
    double g = 0;
    for (int i = 1; i <= r; ++i) {
      const int e = lengths_[i - 1];
      g += fwd[j - 1][i - 1] * e * ipow(p[j - 1], e - 1) * bwd[j][i];
    }
    grad[j - 1] = coefficient_ * g;
  }
  return coefficient_ * fwd[ell_][r];
}

NonConvergence::NonConvergence(double lo_, double hi_)
    : std::runtime_error("layer optimizer starts disagree: best values in [" + std::to_string(lo_) + ", " +
                         std::to_string(hi_) + "]"),
      lo(lo_),
      hi(hi_) {}

SimplexMaxResult maximize_layer_polynomial(const std::vector<int>& lengths, int ell,
                                           const SimplexMaxOptions& options) {
  const LayerPolynomial f(lengths, ell);
  const int r = static_cast<int>(lengths.size());

  std::vector<std::vector<double>> starts;
  starts.emplace_back(ell, 1.0 / ell);
  for (int j = 0; j < ell; ++j) {
    std::vector<double> p(ell, 0.1 / ell);
    p[j] += 0.9;
    starts.push_back(p);
  }
  {
    // r evenly spaced spikes.
    std::vector<double> p(ell, 0.05 / ell);
    for (int i = 0; i < r; ++i) p[(i * ell) / r] += 0.95 / r;
    normalise(p);
    starts.push_back(p);
  }
  std::mt19937_64 rng(options.seed);
  std::exponential_distribution<double> expo(1.0);
  for (int s = 0; s < options.random_starts; ++s) {
    std::vector<double> p(ell);
    for (double& x : p) x = expo(rng);
    normalise(p);
    starts.push_back(p);
  }

  SimplexMaxResult result;
  Refiner refiner(f);
  result.value = -1;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::vector<double> p = starts[s];
    const double v = refiner.run(p);
    result.start_values.push_back(v);
    if (v > result.value) {
      result.value = v;
      result.point = p;
      result.best_start = static_cast<int>(s);
    }
  }
  std::vector<double> sorted = result.start_values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (sorted.size() >= 2 && sorted[0] - sorted[1] > options.agreement) throw NonConvergence(sorted[1], sorted[0]);
  return result;
}

}  // namespace packing
