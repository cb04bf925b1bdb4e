#ifndef PACKING_DENSITY_HPP
#define PACKING_DENSITY_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "packing/core.hpp"
#include "packing/numeric.hpp"
#include "packing/roots.hpp"
#include "packing/simplex_max.hpp"

namespace packing {

/// An asymptotic packing density. `exact` is set when the value is a known
/// rational; otherwise `value` carries an absolute error of at most
/// `error_bound`.
struct DensityValue {
  std::optional<Rational> exact;
  double value = 0;
  double error_bound = 0;
  /// Human-readable route that produced the value.
  std::string provenance;
  std::optional<double> root_a;
  std::optional<double> alpha;
  std::optional<int> shift;
  std::optional<int> cap;
  std::vector<double> proportions;

  static DensityValue rational(Rational q, std::string provenance);
  static DensityValue approximate(double v, double error_bound, std::string provenance);
};

/// Raised when no implemented route applies to the input.
struct NoClosedForm : std::domain_error {
  using std::domain_error::domain_error;
};

/// log2(r + 1) <= min m_i.
bool simple_criterion(const LayeredShape& shape);

/// m!/m^m * prod m_i^{m_i}/m_i!. Throws NoClosedForm when the simplicity
/// criterion fails.
DensityValue simple_layered_density(const LayeredShape& shape);

/// Maximum density of the layered permutation `shape` over layered
/// permutations with at most ell layers.
DensityValue layered_density_cap(const LayeredShape& shape, int ell, const SimplexMaxOptions& options = {});

/// Density of 1^k 2 (equivalently of the layered permutation [k, 1]):
/// k a (1-a)^{k-1} with a = k1_root(k); exactly 1 for k = 1.
DensityValue k1_density(int k);

/// Density of 1^r 2^s. Exact for r, s >= 2; otherwise through k1_density.
DensityValue r_s_density(int r, int s);

/// Density of 1^p 2^r 1^q. Exact for r >= 2; r = 1 goes through alpha_root.
/// p = 0 or q = 0 reduces to the monotone pattern 1^{p+q} 2^r.
DensityValue pqr_density(int p, int q, int r);

/// The r = 1 value assembled the other way round: the binomial factor
/// times k1_density(p + q).
DensityValue pqr_density_factored(int p, int q);

/// Density of a layered permutation given by its shape, through whichever
/// closed form applies. Throws NoClosedForm otherwise.
DensityValue layered_permutation_density(const LayeredShape& shape);

/// Density of a classical layered word whose layers are each strictly
/// decreasing or constant, through the layered permutation with the same
/// layer lengths.
DensityValue layered_word_density(const Pattern& p);

struct OverlapShift {
  /// Case formula on block lengths a_1..a_l.
  int formula = 0;
  /// Least s admitting a word of length m + s whose prefix and suffix of
  /// length m both flatten to the monotone pattern.
  int oracle = 0;
  /// Same search run directly on the pattern as given.
  int oracle_direct = 0;
  bool agree() const { return formula == oracle && oracle == oracle_direct; }
};

/// Case formula for the self-overlap shift of 1^{a_1} ... l^{a_l} (l >= 2).
int overlap_formula(const std::vector<int>& block_lengths);

/// Least shift s >= 1 at which the letters can overlap themselves: there is
/// a word of length m + s whose first m and last m letters both flatten to
/// `letters`. Decided by checking the merged order constraints for cycles.
int overlap_oracle(const std::vector<int>& letters);

/// For a nonconstant layered pattern without hyphens (monotone patterns
/// included): formula on its layer lengths, oracle on the corresponding
/// monotone pattern and on the pattern itself.
OverlapShift m_overlap(const Pattern& p);

/// 1/M for layered patterns without hyphens; 1 for a single layer.
DensityValue gen_layered_density(const Pattern& p);

struct TableRow {
  std::string representative;
  std::string closed_form;
  DensityValue density;
};

/// Densities of the five symmetry classes of patterns in [3]^3.
std::vector<TableRow> three_letter_table();

/// Route names accepted by density_of: "auto", "simple", "k1", "rs", "pqr",
/// "layered", "overlap", "cap".
std::vector<std::string> density_routes();

/// Dispatches a pattern to a closed form. "auto" tries every route, also
/// across the symmetry class. `cap` and `options` are used only by the "cap"
/// route.
DensityValue density_of(const Pattern& p, const std::string& route = "auto", int cap = 0,
                        const SimplexMaxOptions& options = {});

}  // namespace packing

#endif  // PACKING_DENSITY_HPP
