#include "packing/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace packing {

double bracketed_root(const std::function<long double(long double)>& f,
                      const std::function<long double(long double)>& df, double lo, double hi, double tol) {
  long double a = lo, b = hi;
  long double fa = f(a), fb = f(b);
  if (fa == 0) return lo;
  if (fb == 0) return hi;
  if ((fa < 0) == (fb < 0)) throw std::logic_error("bracketed_root: no sign change");
  while (b - a > tol) {
    const long double mid = (a + b) / 2;
    if (mid <= a || mid >= b) break;
    const long double fm = f(mid);
    if (fm == 0) return static_cast<double>(mid);
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  long double x = (a + b) / 2;
  long double fx = f(x);
  for (int i = 0; i < 8; ++i) {
    const long double d = df(x);
    if (d == 0) break;
    const long double next = x - fx / d;
    if (next < a || next > b) break;
    const long double fn = f(next);
    if (std::fabs(fn) >= std::fabs(fx)) break;
    x = next;
    fx = fn;
  }
  return static_cast<double>(x);
}

double k1_root(int k) {
  if (k < 2) throw std::invalid_argument("k1_root needs k >= 2");
  const long double kk = k;
  auto f = [kk](long double a) { return kk * std::pow(a, kk + 1) - (kk + 1) * a + 1; };
  auto df = [kk](long double a) { return kk * (kk + 1) * std::pow(a, kk) - (kk + 1); };
  // a = 1 is always a root; stay clear of it. f(0) = 1 > 0 and f < 0 just
  // below 1 because f'(1) = k^2 - 1 > 0.
  return bracketed_root(f, df, 0.0, 1.0 - 1e-6);
}

AlphaRoot alpha_root(int s) {
  if (s < 2) throw std::invalid_argument("alpha_root needs s >= 2");
  const long double ss = s;
  auto g = [ss](long double x) { return std::pow(1 - ss * x, ss + 1) - 1 + (ss + 1) * x; };
  auto dg = [ss](long double x) { return -ss * (ss + 1) * std::pow(1 - ss * x, ss) + (ss + 1); };
  // g(0) = 0 and g'(0) < 0, g(1/s) = 1/s > 0: scan down from 1/s for a
  // negative value to exclude the trivial root.
  const double hi = 1.0 / s;
  double lo = hi / 2;
  while (g(lo) >= 0) {
    lo /= 2;
    if (lo < 1e-12) throw std::logic_error("alpha_root: bracketing failed");
  }
  AlphaRoot out;
  out.alpha = bracketed_root(g, dg, lo, hi);
  out.a = 1 - s * out.alpha;
  out.residual = static_cast<double>(std::fabs(g(out.alpha)));
  return out;
}

}  // namespace packing
