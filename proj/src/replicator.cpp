#include "ipdx/replicator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ipdx {

AbcfCoefficients AbcfCoefficients::from(const GameParams& p) {
  const double g = p.gamma();
  const double z = p.z;
  return {
      (z - p.pd.r) - g * (z - p.pd.t),
      g * (z - p.pd.s) - (z - p.pd.p),
      z - p.pd.r,
      g * (z - p.pd.s),
  };
}

std::vector<double> rhs_general(std::span<const double> x, const PayoffMatrix& m) {
  const std::size_t n = m.size();
  if (x.size() != n) {
    fail(Errc::dimension_mismatch, "point has dimension " + std::to_string(x.size()) +
                                       ", matrix is " + std::to_string(n) + "x" +
                                       std::to_string(n));
  }
  std::vector<double> fitness(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m.at(i, j) * x[j];
    fitness[i] = acc;
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i] * fitness[i];
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i] = x[i] * (fitness[i] - mean);
  return v;
}

std::array<double, 2> rhs_reduced3(const std::array<double, 2>& x, const GameParams& p) {
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  const double x1 = x[0];
  const double x2 = x[1];
  const double shared = c * x1 * x1 + (f + c - a) * x1 * x2 + (f - b) * x2 * x2;
  const double g = p.gamma();
  return {
      x1 * (shared - c * x1 - f * x2) / g,
      x2 * (shared + (a - c) * x1 + (b - f) * x2) / g,
  };
}

std::array<double, 3> rhs_reduced4(const std::array<double, 3>& x, const GameParams& p) {
  // Fitness advantage over the loner payoff for each explicit strategy; the
  // implicit loner share drops out of the differences.
  const double g = p.gamma();
  const double z = p.z;
  const auto& pd = p.pd;
  const double x1 = x[0], x2 = x[1], x3 = x[2];

  const double u1 = (pd.r - z) * (x1 + x3) + (pd.s * g + p.beta * z - z) * x2;
  const double u2 = (pd.t * g + p.beta * z - z) * x1 + (pd.p - z) * x2 + (pd.t - z) * x3;
  const double u3 = (pd.r - z) * (x1 + x3) + (pd.s - z) * x2;
  const double mean = x1 * u1 + x2 * u2 + x3 * u3;
  return {
      x1 * (u1 - mean) / g,
      x2 * (u2 - mean) / g,
      x3 * (u3 - mean) / g,
  };
}

double time_rescale(const GameParams& p) {
  if (!(p.beta < 1.0)) fail(Errc::beta_out_of_range, "time rescale requires beta < 1");
  return p.gamma();
}

const char* to_string(TerminalFlag f) {
  switch (f) {
    case TerminalFlag::max_time: return "max-time";
    case TerminalFlag::converged: return "converged";
    case TerminalFlag::boundary_absorbed: return "boundary-absorbed";
  }
  return "?";
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

// Clamp round-off negatives to the invariant faces and rescale if the total
// share crept above one.
void project_to_simplex(std::vector<double>& x, double clip_tol) {
  for (double& c : x) {
    if (c < 0.0 && c > -clip_tol) c = 0.0;
  }
  double sum = 0.0;
  for (double c : x) sum += c;
  if (sum > 1.0 && sum < 1.0 + clip_tol) {
    for (double& c : x) c /= sum;
  }
}

}  // namespace

Trajectory integrate(std::span<const double> x0, const VectorField& field,
                     const IntegrationConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.convergence_tol >= 0.0) || !(cfg.clip_tol > 0.0) ||
      cfg.store_stride < 1) {
    fail(Errc::bad_argument, "integration config requires step > 0 and tolerances > 0");
  }

  const std::size_t n = x0.size();
  std::vector<double> x(x0.begin(), x0.end());

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(x);

  std::vector<double> k1, k2, k3, k4, tmp(n);
  const double h = cfg.step;
  double t = 0.0;
  long step_index = 0;

  auto explode = [&](const char* where) {
    fail(Errc::step_explosion,
         std::string(where) + " produced a non-finite coordinate at t=" + std::to_string(t) +
             "; reduce the step size");
  };

  while (t < cfg.max_time - 0.5 * h) {
    k1 = field(x);
    if (!finite(k1)) explode("field evaluation");
    if (cfg.convergence_tol > 0.0 && max_abs(k1) < cfg.convergence_tol) {
      if (traj.times.back() != t) {
        traj.times.push_back(t);
        traj.points.push_back(x);
      }
      bool hit_face = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0.0 && x0[i] != 0.0) hit_face = true;
      }
      traj.terminal = hit_face ? TerminalFlag::boundary_absorbed : TerminalFlag::converged;
      return traj;
    }

    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    k2 = field(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    k3 = field(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    k4 = field(tmp);

    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!finite(x)) explode("step update");
    project_to_simplex(x, cfg.clip_tol);

    t += h;
    ++step_index;
    if (step_index % cfg.store_stride == 0) {
      traj.times.push_back(t);
      traj.points.push_back(x);
    }
  }

  if (traj.times.back() != t) {
    traj.times.push_back(t);
    traj.points.push_back(x);
  }
  traj.terminal = TerminalFlag::max_time;
  return traj;
}

namespace {

Trajectory run_scaled(std::span<const double> x0, const IntegrationConfig& cfg, double scale,
                      const std::function<std::vector<double>(std::span<const double>)>& raw) {
  if (!cfg.rescale_time || scale == 1.0) return integrate(x0, raw, cfg);
  auto scaled = [&](std::span<const double> x) {
    std::vector<double> v = raw(x);
    for (double& c : v) c *= scale;
    return v;
  };
  return integrate(x0, scaled, cfg);
}

}  // namespace

Trajectory integrate_reduced3(const std::array<double, 2>& x0, const GameParams& p,
                              const IntegrationConfig& cfg) {
  validate_params(p);
  auto raw = [&p](std::span<const double> x) {
    const auto v = rhs_reduced3({x[0], x[1]}, p);
    return std::vector<double>{v[0], v[1]};
  };
  return run_scaled(std::span<const double>(x0.data(), 2), cfg, time_rescale(p), raw);
}

Trajectory integrate_reduced4(const std::array<double, 3>& x0, const GameParams& p,
                              const IntegrationConfig& cfg) {
  validate_params(p);
  auto raw = [&p](std::span<const double> x) {
    const auto v = rhs_reduced4({x[0], x[1], x[2]}, p);
    return std::vector<double>{v[0], v[1], v[2]};
  };
  return run_scaled(std::span<const double>(x0.data(), 3), cfg, time_rescale(p), raw);
}

Trajectory integrate_general(std::span<const double> x0, const PayoffMatrix& m,
                             const GameParams& p, const IntegrationConfig& cfg) {
  auto raw = [&m](std::span<const double> x) { return rhs_general(x, m); };
  return run_scaled(x0, cfg, time_rescale(p), raw);
}

}  // namespace ipdx
