#include "ipdx/phase_atlas.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>
#include <thread>

namespace ipdx {

namespace {

// Runs body(i) for i in [0, count) across hardware threads.  Work items must
// be independent; results land in pre-sized slots so output order stays
// deterministic.  The first worker exception is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

BoundaryValues BoundaryValues::at(double beta, double z) {
  return {
      z - 1.0,
      z - 3.0,
      beta * z - 1.0,
      beta * (5.0 - z) - 2.0,
      beta * z * (5.0 - z) * (2.0 - beta) - (z + 3.0),
  };
}

double BoundaryValues::operator[](int idx) const {
  switch (idx) {
    case 1: return b1;
    case 2: return b2;
    case 3: return b3;
    case 4: return b4;
    case 5: return b5;
  }
  fail(Errc::bad_argument, "boundary curve index must be in 1..5");
}

BoundaryValues boundary_values(double beta, double z) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    fail(Errc::beta_out_of_range, "boundary values need 0 <= beta < 1");
  }
  if (!std::isfinite(z)) fail(Errc::bad_argument, "z must be finite");
  return BoundaryValues::at(beta, z);
}

const char* to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
    case Region::V: return "V";
    case Region::VI: return "VI";
    case Region::VII: return "VII";
    case Region::VIII: return "VIII";
    case Region::IX: return "IX";
    case Region::X: return "X";
    case Region::boundary: return "boundary";
  }
  return "?";
}

std::string RegionLabel::name() const {
  if (!is_boundary()) return to_string(region);
  std::ostringstream os;
  os << "boundary(";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i) os << ",";
    os << "B" << curves[i];
  }
  os << ")";
  return os.str();
}

namespace {

Stability label_from(std::initializer_list<double> real_parts) {
  std::vector<std::complex<double>> values;
  for (double re : real_parts) values.emplace_back(re, 0.0);
  return classify_stability(values);
}

struct SignatureRow {
  StabilitySignature signature;
  Region region;
};

const SignatureRow kSignatureTable[] = {
    // Calibrated against the two anchor portraits (VI and VII) and the curve
    // topology of the parameter-plane figure.
    {{Stability::non_hyperbolic, Stability::unstable, Stability::saddle, std::nullopt},
     Region::I},
    {{Stability::non_hyperbolic, Stability::saddle, Stability::saddle, std::nullopt},
     Region::II},
    {{Stability::non_hyperbolic, Stability::saddle, Stability::asymptotically_stable,
      std::nullopt},
     Region::III},
    {{Stability::non_hyperbolic, Stability::unstable, Stability::unstable, Stability::saddle},
     Region::IV},
    {{Stability::non_hyperbolic, Stability::saddle, Stability::unstable, Stability::saddle},
     Region::V},
    {{Stability::non_hyperbolic, Stability::saddle, Stability::unstable,
      Stability::asymptotically_stable},
     Region::VI},
    {{Stability::non_hyperbolic, Stability::asymptotically_stable, Stability::unstable,
      std::nullopt},
     Region::VII},
    {{Stability::non_hyperbolic, Stability::asymptotically_stable, Stability::saddle,
      Stability::saddle},
     Region::VIII},
    {{Stability::non_hyperbolic, Stability::asymptotically_stable, Stability::saddle,
      Stability::unstable},
     Region::IX},
    {{Stability::non_hyperbolic, Stability::asymptotically_stable,
      Stability::asymptotically_stable, Stability::saddle},
     Region::X},
};

}  // namespace

StabilitySignature stability_signature(double beta, double z) {
  GameParams p;
  p.beta = beta;
  p.z = z;
  validate_params(p);
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  const double g = p.gamma();

  StabilitySignature sig;
  sig.all_loner = label_from({0.0, 0.0});
  sig.all_conditional = label_from({c / g, a / g});
  sig.all_defector = label_from({-b / g, (f - b) / g});

  const double d = a - b;
  sig.mixture = std::nullopt;
  if (std::abs(d) >= 1e-12) {
    const double x1 = -b / d;
    const double x2 = a / d;
    if (x1 > 0.0 && x2 > 0.0) {
      sig.mixture = label_from({a * b / (g * d), (a * f - b * c) / (g * d)});
    }
  }
  return sig;
}

RegionLabel classify_region(double beta, double z) {
  if (!(beta > 0.0 && beta < 1.0)) {
    fail(Errc::beta_out_of_range, "region classification needs 0 < beta < 1");
  }
  const BoundaryValues bv = boundary_values(beta, z);
  RegionLabel label;
  for (int k = 1; k <= 5; ++k) {
    if (std::abs(bv[k]) < kBoundaryTol) label.curves.push_back(k);
  }
  if (!label.curves.empty()) {
    label.region = Region::boundary;
    return label;
  }

  const StabilitySignature sig = stability_signature(beta, z);
  for (const SignatureRow& row : kSignatureTable) {
    if (row.signature == sig) {
      label.region = row.region;
      return label;
    }
  }
  std::ostringstream os;
  os << "no region for signature (" << to_string(sig.all_loner) << ", "
     << to_string(sig.all_conditional) << ", " << to_string(sig.all_defector) << ", "
     << (sig.mixture ? to_string(*sig.mixture) : "absent") << ") at beta=" << beta
     << " z=" << z;
  fail(Errc::unknown_signature, os.str());
}

AtlasGrid atlas_sweep(double beta_lo, double beta_hi, double z_lo, double z_hi, int resolution) {
  if (!(resolution >= 1)) fail(Errc::bad_argument, "resolution must be positive");
  if (!(beta_lo >= 0.0 && beta_hi <= 1.0 && beta_lo < beta_hi)) {
    fail(Errc::bad_argument, "beta range must sit inside (0, 1)");
  }
  if (!(z_lo < z_hi) || !std::isfinite(z_lo) || !std::isfinite(z_hi)) {
    fail(Errc::bad_argument, "z range must be a finite interval");
  }
  AtlasGrid grid;
  grid.resolution = resolution;
  for (int i = 0; i < resolution; ++i) {
    grid.betas.push_back(beta_lo + (i + 0.5) * (beta_hi - beta_lo) / resolution);
    grid.zs.push_back(z_lo + (i + 0.5) * (z_hi - z_lo) / resolution);
  }
  const std::size_t cell_count = static_cast<std::size_t>(resolution) * resolution;
  grid.cells.assign(cell_count, RegionLabel{});
  parallel_for(cell_count, [&grid, resolution](std::size_t idx) {
    const double beta = grid.betas[idx % resolution];
    const double z = grid.zs[idx / resolution];
    grid.cells[idx] = classify_region(beta, z);
  });
  return grid;
}

std::vector<std::vector<double>> seed_lattice(int strategy_count, int grid_density,
                                              double margin) {
  if (grid_density < 2) fail(Errc::bad_argument, "grid density must be at least 2");
  std::vector<std::vector<double>> seeds;
  const int g = grid_density;
  if (strategy_count == 3) {
    const double span = 1.0 - 3.0 * margin;
    for (int i = 0; i <= g; ++i) {
      for (int j = 0; i + j <= g; ++j) {
        seeds.push_back({margin + span * i / g, margin + span * j / g});
      }
    }
  } else if (strategy_count == 4) {
    const double span = 1.0 - 4.0 * margin;
    for (int i = 0; i <= g; ++i) {
      for (int j = 0; i + j <= g; ++j) {
        for (int k = 0; i + j + k <= g; ++k) {
          seeds.push_back({margin + span * i / g, margin + span * j / g, margin + span * k / g});
        }
      }
    }
  } else {
    fail(Errc::bad_argument, "strategy count must be 3 or 4");
  }
  return seeds;
}

Portrait make_portrait(const GameParams& p, int strategy_count, int grid_density,
                       const IntegrationConfig& cfg) {
  validate_params(p);
  Portrait portrait;
  portrait.params = p;
  portrait.strategy_count = strategy_count;
  if (p.pd.is_default() && p.beta > 0.0) {
    portrait.region = classify_region(p.beta, p.z);
  }
  portrait.fixed_points = (strategy_count == 3) ? fixed_points_3(p) : fixed_points_4(p);
  portrait.seeds = seed_lattice(strategy_count, grid_density);
  portrait.trajectories.resize(portrait.seeds.size());
  parallel_for(portrait.seeds.size(), [&](std::size_t idx) {
    const auto& seed = portrait.seeds[idx];
    portrait.trajectories[idx] =
        strategy_count == 3 ? integrate_reduced3({seed[0], seed[1]}, p, cfg)
                            : integrate_reduced4({seed[0], seed[1], seed[2]}, p, cfg);
  });
  return portrait;
}

}  // namespace ipdx
