#ifndef IPDX_EQUILIBRIUM_HPP
#define IPDX_EQUILIBRIUM_HPP

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ipdx/game_model.hpp"
#include "ipdx/replicator.hpp"

namespace ipdx {

enum class Stability { asymptotically_stable, unstable, saddle, non_hyperbolic };

const char* to_string(Stability s);

// Real parts within this band of zero count as zero for stability labels.
constexpr double kHyperbolicTol = 1e-10;

Stability classify_stability(std::span<const std::complex<double>> eigenvalues,
                             double tol = kHyperbolicTol);

struct EigenPair {
  std::complex<double> value;
  std::vector<std::complex<double>> vector;
  bool defective = false;
};

// Closed-form eigen decomposition for 2x2 and 3x3 real matrices (row-major):
// roots of the characteristic polynomial plus null-space eigenvectors.
std::vector<EigenPair> eigen_small(std::span<const double> m, int n);

enum class FixedPointKind { vertex, edge, interior, fixed_line };

const char* to_string(FixedPointKind k);

struct FixedPointReport {
  std::vector<double> location;  // reduced coordinates
  FixedPointKind kind = FixedPointKind::vertex;
  bool exists_in_simplex = true;
  std::optional<double> alpha;   // parameter for fixed-line samples

  std::vector<double> jacobian;  // row-major n x n
  std::vector<EigenPair> eigenpairs;  // sorted by real part descending, then imaginary part
  Stability stability = Stability::non_hyperbolic;

  // Analytic closed forms where available, in the same sort order.  An
  // empty vector entry means no closed-form direction is attached.
  std::vector<std::complex<double>> closed_form_eigenvalues;
  std::vector<std::vector<double>> closed_form_eigenvectors;
};

// Analytic Jacobians of the reduced replicator fields (unrescaled time).
std::array<double, 4> jacobian_reduced3(const std::array<double, 2>& x, const GameParams& p);
std::array<double, 9> jacobian_reduced4(const std::array<double, 3>& x, const GameParams& p);

// Central finite differences, the independent cross-check for the analytic
// Jacobians.
std::vector<double> finite_difference_jacobian(const VectorField& field,
                                               std::span<const double> x, double h = 1e-6);

// All fixed points of the 3-strategy reduced dynamics: the three vertices
// plus the conditional/defector mixture.  When the mixture's denominator
// `a - b` vanishes (|a-b| < 1e-12) the mixture escapes to infinity and only
// the vertices are reported.
std::vector<FixedPointReport> fixed_points_3(const GameParams& p);

// All fixed points of the 4-strategy reduced dynamics: four vertices, the
// conditional/cooperator fixed line sampled at alpha in {0, 1/4, 1/2, 3/4, 1},
// and the conditional/defector mixture (same degeneracy rule as above).
std::vector<FixedPointReport> fixed_points_4(const GameParams& p);

// True when the mixture point is degenerate for these parameters.
bool polymorphic_degenerate(const GameParams& p);

// Share of individuals found in cooperating partnerships, in partnerships of
// mutual defection, and living alone, at the stable mixture.  Requires the
// mixture to be stable and inside the simplex.
std::array<double, 3> partnership_census(const GameParams& p);

}  // namespace ipdx

#endif  // IPDX_EQUILIBRIUM_HPP
