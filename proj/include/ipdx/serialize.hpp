#ifndef IPDX_SERIALIZE_HPP
#define IPDX_SERIALIZE_HPP

#include <span>
#include <string>

#include <json.hpp>

#include "ipdx/equilibrium.hpp"
#include "ipdx/game_model.hpp"
#include "ipdx/phase_atlas.hpp"
#include "ipdx/replicator.hpp"

namespace ipdx {

// Shortest round-trip decimal form, identical across runs.
std::string format_double(double v);

nlohmann::json to_json(const PayoffMatrix& m);
nlohmann::json to_json(const FixedPointReport& r);
nlohmann::json to_json(const Trajectory& t);
nlohmann::json to_json(const Portrait& p);
nlohmann::json params_json(const GameParams& p);

// Groups the fixed-line samples into a single object with their alphas.
nlohmann::json fixed_points_json(std::span<const FixedPointReport> reports);

std::string trajectory_csv(const Trajectory& t);
// With a trailing logC column (3-strategy trajectories only).
std::string trajectory_audit_csv(const Trajectory& t, const GameParams& p);
std::string atlas_csv(const AtlasGrid& grid);
std::string payoff_csv(const PayoffMatrix& m);

}  // namespace ipdx

#endif  // IPDX_SERIALIZE_HPP
