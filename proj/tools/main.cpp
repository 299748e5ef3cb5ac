// Command-line front end: payoff compilation, fixed-point reports, trajectory
// integration, the (beta, z) region atlas, phase portraits, and the conserved
// quantity audit.

#include <array>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipdx/equilibrium.hpp"
#include "ipdx/game_model.hpp"
#include "ipdx/phase_atlas.hpp"
#include "ipdx/replicator.hpp"
#include "ipdx/serialize.hpp"
#include "ipdx/svg.hpp"
#include "ipdx/trajectory_invariant.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using ipdx::Errc;
using ipdx::Error;

struct CommonOpts {
  ipdx::GameParams params;
  int set = 3;
  std::string out;
  std::string format;
  double step = 1e-2;
  double max_time = 200.0;
  std::string seed;
  std::string config;
};

struct BoundFlags {
  CLI::Option* t = nullptr;
  CLI::Option* r = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* s = nullptr;
  CLI::Option* z = nullptr;
  CLI::Option* beta = nullptr;
};

BoundFlags add_common(CLI::App* cmd, CommonOpts& o) {
  BoundFlags flags;
  flags.t = cmd->add_option("--t", o.params.pd.t, "temptation payoff");
  flags.r = cmd->add_option("--r", o.params.pd.r, "reward payoff");
  flags.p = cmd->add_option("--p", o.params.pd.p, "punishment payoff");
  flags.s = cmd->add_option("--s", o.params.pd.s, "sucker payoff");
  flags.z = cmd->add_option("--z", o.params.z, "outside-option payoff");
  flags.beta = cmd->add_option("--beta", o.params.beta, "survival probability");
  cmd->add_option("--set", o.set, "strategy set size (3 or 4)")->check(CLI::IsMember({3, 4}));
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_option("--step", o.step, "integration step (rescaled time)");
  cmd->add_option("--max-time", o.max_time, "integration horizon (rescaled time)");
  cmd->add_option("--seed", o.seed, "initial point x1,x2[,x3]");
  cmd->add_option("--config", o.config, "key=value parameter file");
  return flags;
}

// Plain key=value file, '#' comments.  CLI flags take precedence.
void apply_config(const CommonOpts& o, const BoundFlags& flags, ipdx::GameParams& params) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) ipdx::fail(Errc::bad_argument, "cannot read config file " + o.config);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        ipdx::fail(Errc::bad_argument,
                   "config line " + std::to_string(lineno) + " is not key=value");
      }
      continue;
    }
    auto trim = [](std::string v) {
      const auto b = v.find_first_not_of(" \t\r");
      const auto e = v.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    double parsed = 0.0;
    try {
      std::size_t used = 0;
      parsed = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      ipdx::fail(Errc::bad_argument, "config value for '" + key + "' is not a number");
    }
    auto apply = [&](CLI::Option* flag, double& slot) {
      if (flag->count() == 0) slot = parsed;
    };
    if (key == "t") apply(flags.t, params.pd.t);
    else if (key == "r") apply(flags.r, params.pd.r);
    else if (key == "p") apply(flags.p, params.pd.p);
    else if (key == "s") apply(flags.s, params.pd.s);
    else if (key == "z") apply(flags.z, params.z);
    else if (key == "beta") apply(flags.beta, params.beta);
    else ipdx::fail(Errc::bad_argument, "unknown config key '" + key + "'");
  }
}

std::vector<double> parse_seed(const std::string& text, int set) {
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      coords.push_back(std::stod(part));
    } catch (const std::exception&) {
      ipdx::fail(Errc::bad_argument, "seed component '" + part + "' is not a number");
    }
  }
  const std::size_t want = set == 3 ? 2 : 3;
  if (coords.size() != want) {
    ipdx::fail(Errc::bad_argument, "seed needs " + std::to_string(want) +
                                       " components for the " + std::to_string(set) +
                                       "-strategy set");
  }
  double sum = 0.0;
  for (double c : coords) {
    if (c < 0.0) ipdx::fail(Errc::bad_argument, "seed components must be non-negative");
    sum += c;
  }
  if (sum > 1.0 + 1e-12) ipdx::fail(Errc::bad_argument, "seed components must sum to at most 1");
  return coords;
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) ipdx::fail(Errc::bad_argument, "cannot open output file " + path);
  out << payload;
}

nlohmann::json meta() { return {{"tool", "ipdx"}, {"version", kVersion}}; }

std::string pick_format(const CommonOpts& o, const char* fallback,
                        std::initializer_list<const char*> allowed) {
  const std::string format = o.format.empty() ? fallback : o.format;
  for (const char* ok : allowed) {
    if (format == ok) return format;
  }
  ipdx::fail(Errc::bad_argument, "format '" + format + "' is not supported by this command");
}

ipdx::IntegrationConfig integration_config(const CommonOpts& o) {
  ipdx::IntegrationConfig cfg;
  cfg.step = o.step;
  cfg.max_time = o.max_time;
  return cfg;
}

void require_standard_payoffs(const CommonOpts& o, const char* what) {
  if (!o.params.pd.is_default()) {
    ipdx::fail(Errc::bad_argument,
               std::string(what) + " assumes the standard dilemma payoffs (5, 3, 1, 0)");
  }
}

int cmd_payoff(const CommonOpts& o) {
  ipdx::validate_params(o.params);
  const auto compiled = ipdx::compile_payoff_matrix(o.set, o.params);
  const auto closed =
      o.set == 3 ? ipdx::closed_form_matrix3(o.params) : ipdx::closed_form_matrix4(o.params);
  double max_delta = 0.0;
  for (std::size_t i = 0; i < compiled.entries.size(); ++i) {
    max_delta = std::max(max_delta, std::abs(compiled.entries[i] - closed.entries[i]));
  }
  const auto format = pick_format(o, "json", {"json", "csv"});
  if (format == "csv") {
    write_output(o.out, ipdx::payoff_csv(compiled));
  } else {
    nlohmann::json j;
    j["meta"] = meta();
    j["params"] = ipdx::params_json(o.params);
    j["compiled"] = ipdx::to_json(compiled);
    j["closed_form"] = ipdx::to_json(closed)["entries"];
    j["max_delta"] = max_delta;
    write_output(o.out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_fixed_points(const CommonOpts& o) {
  ipdx::validate_params(o.params);
  const auto reports =
      o.set == 3 ? ipdx::fixed_points_3(o.params) : ipdx::fixed_points_4(o.params);
  if (ipdx::polymorphic_degenerate(o.params)) {
    std::cerr << "warning: mixture denominator vanishes at these parameters; "
                 "reporting the remaining fixed points only\n";
  }
  pick_format(o, "json", {"json"});
  nlohmann::json j;
  j["meta"] = meta();
  j["params"] = ipdx::params_json(o.params);
  j["strategy_count"] = o.set;
  j["fixed_points"] = ipdx::fixed_points_json(reports);
  write_output(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_integrate(const CommonOpts& o, bool audit) {
  ipdx::validate_params(o.params);
  if (o.seed.empty()) ipdx::fail(Errc::bad_argument, "integrate needs --seed");
  const auto seed = parse_seed(o.seed, o.set);
  const auto cfg = integration_config(o);
  ipdx::Trajectory traj;
  if (o.set == 3) {
    traj = ipdx::integrate_reduced3({seed[0], seed[1]}, o.params, cfg);
  } else {
    traj = ipdx::integrate_reduced4({seed[0], seed[1], seed[2]}, o.params, cfg);
  }
  if (audit && o.set != 3) {
    ipdx::fail(Errc::bad_argument, "the invariant audit applies to the 3-strategy set");
  }
  const auto format = pick_format(o, "csv", {"csv", "json"});
  if (format == "csv") {
    write_output(o.out, audit ? ipdx::trajectory_audit_csv(traj, o.params)
                              : ipdx::trajectory_csv(traj));
  } else {
    nlohmann::json j = ipdx::to_json(traj);
    j["meta"] = meta();
    j["params"] = ipdx::params_json(o.params);
    if (audit) {
      const auto a = ipdx::audit_invariant(traj, o.params);
      j["invariant"] = {{"initial_log", a.initial_log}, {"max_drift", a.max_drift}};
    }
    write_output(o.out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_atlas(const CommonOpts& o, double beta_lo, double beta_hi, double z_lo, double z_hi,
              int resolution) {
  require_standard_payoffs(o, "the region atlas");
  const auto grid = ipdx::atlas_sweep(beta_lo, beta_hi, z_lo, z_hi, resolution);
  const auto format = pick_format(o, "csv", {"csv", "json", "svg"});
  if (format == "csv") {
    write_output(o.out, ipdx::atlas_csv(grid));
  } else if (format == "svg") {
    write_output(o.out, ipdx::atlas_svg(grid));
  } else {
    nlohmann::json j;
    j["meta"] = meta();
    j["betas"] = grid.betas;
    j["zs"] = grid.zs;
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& cell : grid.cells) labels.push_back(cell.name());
    j["regions"] = std::move(labels);
    write_output(o.out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_portrait(const CommonOpts& o, int grid_density, int stride) {
  ipdx::validate_params(o.params);
  auto cfg = integration_config(o);
  cfg.store_stride = stride;
  const auto portrait = ipdx::make_portrait(o.params, o.set, grid_density, cfg);
  const auto format = pick_format(o, "json", {"json", "svg"});
  if (format == "svg") {
    write_output(o.out, ipdx::portrait_svg(portrait));
  } else {
    nlohmann::json j = ipdx::to_json(portrait);
    j["meta"] = meta();
    write_output(o.out, j.dump() + "\n");
  }
  return 0;
}

int cmd_invariant_check(const CommonOpts& o) {
  require_standard_payoffs(o, "the invariant audit");
  ipdx::validate_params(o.params);
  const std::string seed_text = o.seed.empty() ? "0.3,0.3" : o.seed;
  const auto seed = parse_seed(seed_text, 3);
  auto cfg = integration_config(o);
  cfg.convergence_tol = 0.0;
  const auto traj = ipdx::integrate_for_audit({seed[0], seed[1]}, o.params, cfg);
  const auto audit = ipdx::audit_invariant(traj, o.params);
  const auto format = pick_format(o, "csv", {"csv", "json"});
  if (format == "csv") {
    write_output(o.out, ipdx::trajectory_audit_csv(traj, o.params));
  } else {
    nlohmann::json j;
    j["meta"] = meta();
    j["params"] = ipdx::params_json(o.params);
    j["initial_log"] = audit.initial_log;
    j["max_drift"] = audit.max_drift;
    write_output(o.out, j.dump(2) + "\n");
  }
  std::cerr << "log-invariant drift over [0, " << o.max_time << "]: "
            << ipdx::format_double(audit.max_drift) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated prisoner's dilemma with an outside option: payoff compilation, "
               "replicator dynamics, fixed-point analysis, and parameter-plane maps"};
  app.require_subcommand(1);

  CommonOpts payoff_opts, fp_opts, integ_opts, atlas_opts, portrait_opts, inv_opts;

  auto* payoff = app.add_subcommand("payoff", "compile the repeated-game payoff matrix");
  auto payoff_flags = add_common(payoff, payoff_opts);

  auto* fixed = app.add_subcommand("fixed-points", "enumerate and classify fixed points");
  auto fixed_flags = add_common(fixed, fp_opts);

  auto* integ = app.add_subcommand("integrate", "integrate one trajectory from --seed");
  auto integ_flags = add_common(integ, integ_opts);
  bool audit = false;
  integ->add_flag("--audit", audit, "append the log-invariant column (3-strategy)");

  auto* atlas = app.add_subcommand("atlas", "classify a (beta, z) parameter grid");
  auto atlas_flags = add_common(atlas, atlas_opts);
  double beta_lo = 0.0, beta_hi = 1.0, z_lo = 0.0, z_hi = 4.0;
  int resolution = 200;
  atlas->add_option("--beta-min", beta_lo, "sweep start");
  atlas->add_option("--beta-max", beta_hi, "sweep end");
  atlas->add_option("--z-min", z_lo, "sweep start");
  atlas->add_option("--z-max", z_hi, "sweep end");
  atlas->add_option("--resolution", resolution, "cells per axis");

  auto* portrait = app.add_subcommand("portrait", "phase portrait from an interior seed grid");
  auto portrait_flags = add_common(portrait, portrait_opts);
  int grid_density = 5;
  int stride = 10;
  portrait->add_option("--grid-density", grid_density, "seed lattice density");
  portrait->add_option("--stride", stride, "store every k-th integration step");

  auto* invariant = app.add_subcommand("invariant-check",
                                       "audit the conserved quantity along a trajectory");
  auto inv_flags = add_common(invariant, inv_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (payoff->parsed()) {
      apply_config(payoff_opts, payoff_flags, payoff_opts.params);
      return cmd_payoff(payoff_opts);
    }
    if (fixed->parsed()) {
      apply_config(fp_opts, fixed_flags, fp_opts.params);
      return cmd_fixed_points(fp_opts);
    }
    if (integ->parsed()) {
      apply_config(integ_opts, integ_flags, integ_opts.params);
      return cmd_integrate(integ_opts, audit);
    }
    if (atlas->parsed()) {
      apply_config(atlas_opts, atlas_flags, atlas_opts.params);
      return cmd_atlas(atlas_opts, beta_lo, beta_hi, z_lo, z_hi, resolution);
    }
    if (portrait->parsed()) {
      apply_config(portrait_opts, portrait_flags, portrait_opts.params);
      return cmd_portrait(portrait_opts, grid_density, stride);
    }
    if (invariant->parsed()) {
      apply_config(inv_opts, inv_flags, inv_opts.params);
      return cmd_invariant_check(inv_opts);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
