#ifndef IPDX_REPLICATOR_HPP
#define IPDX_REPLICATOR_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ipdx/game_model.hpp"

namespace ipdx {

// Coefficients of the reduced 3-strategy cubic field, derived from the game
// parameters.  With gamma = 1 - beta:
//   a = (z-r) - gamma*(z-t)      b = gamma*(z-s) - (z-p)
//   c = (z-r)                    f = gamma*(z-s)
struct AbcfCoefficients {
  double a, b, c, f;

  static AbcfCoefficients from(const GameParams& p);
};

// Standard replicator field x_i * ((Mx)_i - x.Mx) on the full simplex.
// Dimension of x must equal the matrix size; faces x_i = 0 are invariant.
std::vector<double> rhs_general(std::span<const double> x, const PayoffMatrix& m);

// Reduced 3-strategy field in (x1, x2) = (conditional, defector) shares with
// the loner share implicit.  Unrescaled time: carries the 1/(1-beta) factor.
std::array<double, 2> rhs_reduced3(const std::array<double, 2>& x, const GameParams& p);

// Reduced 4-strategy field in (x1, x2, x3) = (conditional, defector,
// cooperator) shares with the loner share implicit.  Unrescaled time.
std::array<double, 3> rhs_reduced4(const std::array<double, 3>& x, const GameParams& p);

// Multiplying the field by this factor (1 - beta) rescales time only:
// orbits and fixed points are preserved and eigenvalues scale by it.
double time_rescale(const GameParams& p);

enum class TerminalFlag { max_time, converged, boundary_absorbed };

const char* to_string(TerminalFlag f);

struct IntegrationConfig {
  double step = 1e-2;
  double max_time = 200.0;
  double convergence_tol = 1e-10;  // stop once |field|_inf drops below; 0 disables
  double clip_tol = 1e-12;         // round-off band for clamping small negatives
  bool rescale_time = true;        // integrate the field multiplied by (1 - beta)
  int store_stride = 1;            // keep every k-th step (the endpoint always)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> points;
  TerminalFlag terminal = TerminalFlag::max_time;

  const std::vector<double>& back() const { return points.back(); }
};

using VectorField = std::function<std::vector<double>(std::span<const double>)>;

// Classical fixed-step 4th-order integration.  After each step, coordinates
// in (-clip_tol, 0) are clamped to zero and the point is renormalized if the
// total share exceeds one.  Throws StepExplosion on NaN/inf.
Trajectory integrate(std::span<const double> x0, const VectorField& field,
                     const IntegrationConfig& cfg);

// Convenience wrappers that apply the time rescale from `cfg`.
Trajectory integrate_reduced3(const std::array<double, 2>& x0, const GameParams& p,
                              const IntegrationConfig& cfg);
Trajectory integrate_reduced4(const std::array<double, 3>& x0, const GameParams& p,
                              const IntegrationConfig& cfg);
Trajectory integrate_general(std::span<const double> x0, const PayoffMatrix& m,
                             const GameParams& p, const IntegrationConfig& cfg);

}  // namespace ipdx

#endif  // IPDX_REPLICATOR_HPP
