#ifndef PACKING_ROOTS_HPP
#define PACKING_ROOTS_HPP

#include <functional>

namespace packing {

/// Root of f in [lo, hi] given a sign change: bisection down to a bracket of
/// width `tol`, then Newton steps that are kept only while they stay inside
/// the bracket and shrink |f|.
double bracketed_root(const std::function<long double(long double)>& f,
                      const std::function<long double(long double)>& df, double lo, double hi,
                      double tol = 1e-14);

/// The root in (0, 1) of k a^{k+1} - (k+1) a + 1 other than a = 1 (k >= 2).
double k1_root(int k);

struct AlphaRoot {
  double alpha = 0;
  /// 1 - s alpha, which coincides with k1_root(s).
  double a = 0;
  double residual = 0;
};

/// The nonzero root of (1 - s x)^{s+1} = 1 - (s+1) x in (0, 1/s] (s >= 2).
AlphaRoot alpha_root(int s);

}  // namespace packing

#endif  // PACKING_ROOTS_HPP
