#ifndef PACKING_SIMPLEX_MAX_HPP
#define PACKING_SIMPLEX_MAX_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace packing {

/// F(p) = multinomial(m; m_1..m_r) * sum over j_1 < ... < j_r of
/// prod_i p_{j_i}^{m_i}, for p on the simplex of dimension ell - 1. This is
/// the limiting density of the layered permutation [m_1..m_r] in layered
/// permutations whose ell layers have proportions p.
class LayerPolynomial {
 public:
  LayerPolynomial(std::vector<int> lengths, int ell);

  int dimension() const { return ell_; }
  double value(const std::vector<double>& p) const;
  /// Returns F(p) and writes dF/dp_j into grad.
  double gradient(const std::vector<double>& p, std::vector<double>& grad) const;

 private:
  std::vector<int> lengths_;
  int ell_;
  double coefficient_;
};

struct SimplexMaxOptions {
  int random_starts = 64;
  std::uint64_t seed = 0x5eed2024;
  /// The two best starts must agree this closely.
  double agreement = 1e-11;
};

struct SimplexMaxResult {
  double value = 0;
  std::vector<double> point;
  /// Final value of every start, in start order.
  std::vector<double> start_values;
  int best_start = 0;
};

struct NonConvergence : std::runtime_error {
  NonConvergence(double lo, double hi);
  double lo;
  double hi;
};

/// Multistart maximization of a LayerPolynomial: barycenter, spikes and
/// Dirichlet random starts, each refined by projected gradient ascent, the
/// Baum-Eagon fixed-point iteration, and Newton steps on the KKT system of
/// its support. Throws NonConvergence when the two best starts disagree.
SimplexMaxResult maximize_layer_polynomial(const std::vector<int>& lengths, int ell,
                                           const SimplexMaxOptions& options = {});

}  // namespace packing

#endif  // PACKING_SIMPLEX_MAX_HPP
