#ifndef IPDX_TRAJECTORY_INVARIANT_HPP
#define IPDX_TRAJECTORY_INVARIANT_HPP

#include <array>
#include <span>

#include "ipdx/replicator.hpp"

namespace ipdx {

// Ratio coordinates for the reduced 3-strategy system:
//   k = x2 / x1,   l = (1 - x1 - x2) / x1.
// The map is singular on the x1 = 0 face.
struct KlPoint {
  double k;
  double l;
};

KlPoint to_kl(const std::array<double, 2>& x);
std::array<double, 2> from_kl(const KlPoint& p);

// The reduced dynamics in ratio coordinates (rescaled time):
//   dk/dt = k (a + b k) / (1 + k + l)
//   dl/dt = l (c + f k) / (1 + k + l)
std::array<double, 2> kl_rhs(const KlPoint& p, const AbcfCoefficients& coeffs);

// The quantity conserved along every solution trajectory, in the form
//   log C = bc log|k| + (af - bc) log|a + bk| - ab log|l|.
struct InvariantConstant {
  double value;      // exp of the log form
  double exp_k;      // bc
  double exp_shift;  // af - bc
  double exp_l;      // ab
};

// Log form; preferred for audits since the exponentiated constant can be
// extreme.  Requires an interior point away from the a + bk = 0 locus and
// non-degenerate coefficients (a, b != 0).
double invariant_log(const std::array<double, 2>& x, const GameParams& p);

// Same constant from explicitly tracked shares (x1, x2, x3).  Computing the
// loner share by subtraction destroys its relative accuracy once it is tiny,
// so audits track all three shares; this overload accepts them down to the
// underflow limit.
double invariant_log_shares(const std::array<double, 3>& shares, const GameParams& p);

InvariantConstant invariant_value(const std::array<double, 2>& x, const GameParams& p);

// Integrates the 3-strategy dynamics with every share explicit, which keeps
// vanishing shares accurate in relative terms.  Points are (x1, x2, x3).
Trajectory integrate_for_audit(const std::array<double, 2>& x0, const GameParams& p,
                               const IntegrationConfig& cfg);

struct InvariantAudit {
  double initial_log;
  double max_drift;  // max |log C(t) - log C(0)| along the trajectory
};

// Evaluates the log invariant along every stored trajectory point; accepts
// reduced (2-share) or audit (3-share) trajectories.
InvariantAudit audit_invariant(const Trajectory& traj, const GameParams& p);

}  // namespace ipdx

#endif  // IPDX_TRAJECTORY_INVARIANT_HPP
