#include "ipdx/trajectory_invariant.hpp"

#include <cmath>

namespace ipdx {

namespace {

constexpr double kSingularTol = 1e-12;

double log_constant(double x1, double x2, double x3, const GameParams& p) {
  const auto co = AbcfCoefficients::from(p);
  if (std::abs(co.a) < kSingularTol || std::abs(co.b) < kSingularTol) {
    fail(Errc::degenerate_exponent,
         "the conserved quantity is undefined when a or b vanishes");
  }
  const double k = x2 / x1;
  const double l = x3 / x1;
  const double shift = co.a + co.b * k;
  if (std::abs(shift) < kSingularTol) {
    fail(Errc::on_separatrix, "point lies on the a + bk = 0 separatrix");
  }
  const double bc = co.b * co.c;
  const double af_bc = co.a * co.f - bc;
  const double ab = co.a * co.b;
  return bc * std::log(std::abs(k)) + af_bc * std::log(std::abs(shift)) -
         ab * std::log(std::abs(l));
}

}  // namespace

KlPoint to_kl(const std::array<double, 2>& x) {
  if (!(x[0] > kSingularTol)) {
    fail(Errc::singular_transform, "ratio coordinates are singular on the x1 = 0 face");
  }
  return {x[1] / x[0], (1.0 - x[0] - x[1]) / x[0]};
}

std::array<double, 2> from_kl(const KlPoint& p) {
  const double denom = 1.0 + p.k + p.l;
  return {1.0 / denom, p.k / denom};
}

std::array<double, 2> kl_rhs(const KlPoint& p, const AbcfCoefficients& coeffs) {
  const double denom = 1.0 + p.k + p.l;
  return {
      p.k * (coeffs.a + coeffs.b * p.k) / denom,
      p.l * (coeffs.c + coeffs.f * p.k) / denom,
  };
}

double invariant_log(const std::array<double, 2>& x, const GameParams& p) {
  validate_params(p);
  const double x3 = 1.0 - x[0] - x[1];
  if (!(x[0] > kSingularTol && x[1] > kSingularTol && x3 > kSingularTol)) {
    fail(Errc::singular_transform, "the invariant needs an interior point");
  }
  return log_constant(x[0], x[1], x3, p);
}

double invariant_log_shares(const std::array<double, 3>& shares, const GameParams& p) {
  validate_params(p);
  if (!(shares[0] > 0.0 && shares[1] > 0.0 && shares[2] > 0.0)) {
    fail(Errc::singular_transform, "the invariant needs strictly positive shares");
  }
  return log_constant(shares[0], shares[1], shares[2], p);
}

InvariantConstant invariant_value(const std::array<double, 2>& x, const GameParams& p) {
  const auto co = AbcfCoefficients::from(p);
  const double bc = co.b * co.c;
  return {std::exp(invariant_log(x, p)), bc, co.a * co.f - bc, co.a * co.b};
}

Trajectory integrate_for_audit(const std::array<double, 2>& x0, const GameParams& p,
                               const IntegrationConfig& cfg) {
  validate_params(p);
  const PayoffMatrix m = closed_form_matrix3(p);
  const std::array<double, 3> full{x0[0], x0[1], 1.0 - x0[0] - x0[1]};
  return integrate_general(std::span<const double>(full.data(), 3), m, p, cfg);
}

InvariantAudit audit_invariant(const Trajectory& traj, const GameParams& p) {
  InvariantAudit audit{0.0, 0.0};
  bool first = true;
  for (const auto& point : traj.points) {
    const double lc = point.size() == 3
                          ? invariant_log_shares({point[0], point[1], point[2]}, p)
                          : invariant_log({point[0], point[1]}, p);
    if (first) {
      audit.initial_log = lc;
      first = false;
    } else {
      audit.max_drift = std::max(audit.max_drift, std::abs(lc - audit.initial_log));
    }
  }
  return audit;
}

}  // namespace ipdx
