#ifndef IPDX_PHASE_ATLAS_HPP
#define IPDX_PHASE_ATLAS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ipdx/equilibrium.hpp"

namespace ipdx {

// Signed distances from the five curves that partition the (beta, z) plane
// at the standard dilemma payoffs:
//   b1 = z - 1                      b2 = z - 3
//   b3 = beta*z - 1                 b4 = beta*(5 - z) - 2
//   b5 = beta*z*(5 - z)*(2 - beta) - (z + 3)
struct BoundaryValues {
  double b1, b2, b3, b4, b5;

  static BoundaryValues at(double beta, double z);
  double operator[](int idx) const;  // idx in 1..5
};

// Curve values within this band of zero classify as on-boundary.
constexpr double kBoundaryTol = 1e-9;

// Stability of the four fixed points of the reduced 3-strategy dynamics, in
// the order all-loner, all-conditional, all-defector, mixture.  The mixture
// label is absent when the point falls outside the simplex (where its sign
// data says nothing about the phase portrait).
struct StabilitySignature {
  Stability all_loner;
  Stability all_conditional;
  Stability all_defector;
  std::optional<Stability> mixture;

  bool operator==(const StabilitySignature&) const = default;
};

StabilitySignature stability_signature(double beta, double z);

enum class Region { I, II, III, IV, V, VI, VII, VIII, IX, X, boundary };

const char* to_string(Region r);

struct RegionLabel {
  Region region = Region::boundary;
  std::vector<int> curves;  // indices of the vanishing boundary values (1..5)

  bool is_boundary() const { return region == Region::boundary; }
  std::string name() const;
};

BoundaryValues boundary_values(double beta, double z);

// Maps the stability signature to one of the ten qualitative regions, or to
// a boundary label when within kBoundaryTol of a separating curve.  Assumes
// the standard dilemma payoffs.
RegionLabel classify_region(double beta, double z);

struct AtlasGrid {
  int resolution = 0;
  std::vector<double> betas;       // cell centres, ascending
  std::vector<double> zs;          // cell centres, ascending
  std::vector<RegionLabel> cells;  // row-major, one row per z value

  const RegionLabel& at(int z_idx, int beta_idx) const {
    return cells[static_cast<std::size_t>(z_idx) * betas.size() + beta_idx];
  }
};

AtlasGrid atlas_sweep(double beta_lo, double beta_hi, double z_lo, double z_hi, int resolution);

struct Portrait {
  GameParams params;
  int strategy_count = 3;
  std::optional<RegionLabel> region;  // annotated at the standard payoffs only
  std::vector<FixedPointReport> fixed_points;
  std::vector<std::vector<double>> seeds;
  std::vector<Trajectory> trajectories;
};

// Fixed points plus trajectories from a uniform barycentric seed lattice
// with a 0.02 margin from every face.
Portrait make_portrait(const GameParams& p, int strategy_count, int grid_density,
                       const IntegrationConfig& cfg);

// The interior seed lattice on its own (reduced coordinates).
std::vector<std::vector<double>> seed_lattice(int strategy_count, int grid_density,
                                              double margin = 0.02);

}  // namespace ipdx

#endif  // IPDX_PHASE_ATLAS_HPP
