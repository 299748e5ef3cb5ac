#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ipdx/equilibrium.hpp"
#include "ipdx/game_model.hpp"
#include "ipdx/phase_atlas.hpp"
#include "ipdx/replicator.hpp"
#include "ipdx/trajectory_invariant.hpp"

namespace py = pybind11;
using namespace ipdx;

namespace {

py::dict matrix_dict(const PayoffMatrix& m) {
  py::list rows;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    py::list row;
    for (std::size_t j = 0; j < n; ++j) row.append(m.at(i, j));
    rows.append(row);
  }
  py::dict d;
  d["strategies"] = m.strategies;
  d["entries"] = rows;
  return d;
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["t"] = t.times;
  d["points"] = t.points;
  d["terminal_flag"] = std::string(to_string(t.terminal));
  return d;
}

py::dict report_dict(const FixedPointReport& r) {
  py::dict d;
  d["location"] = r.location;
  d["kind"] = std::string(to_string(r.kind));
  d["exists_in_simplex"] = r.exists_in_simplex;
  if (r.alpha) d["alpha"] = *r.alpha;
  d["jacobian"] = r.jacobian;
  std::vector<std::complex<double>> values;
  std::vector<std::vector<std::complex<double>>> vectors;
  for (const auto& e : r.eigenpairs) {
    values.push_back(e.value);
    vectors.push_back(e.vector);
  }
  d["eigenvalues"] = values;
  d["eigenvectors"] = vectors;
  d["stability"] = std::string(to_string(r.stability));
  if (!r.closed_form_eigenvalues.empty()) {
    d["closed_form_eigenvalues"] = r.closed_form_eigenvalues;
  }
  return d;
}

GameParams make_params(double t, double r, double p, double s, double z, double beta) {
  GameParams gp;
  gp.pd = {t, r, p, s};
  gp.z = z;
  gp.beta = beta;
  validate_params(gp);
  return gp;
}

IntegrationConfig make_config(double step, double max_time, double convergence_tol) {
  IntegrationConfig cfg;
  cfg.step = step;
  cfg.max_time = max_time;
  cfg.convergence_tol = convergence_tol;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(ipdx, m) {
  m.doc() = "Repeated prisoner's dilemma with an outside option: payoff compilation, "
            "replicator dynamics, fixed points, and the (beta, z) region atlas";

  py::register_exception<Error>(m, "IpdxError");

  py::class_<GameParams>(m, "GameParams")
      .def(py::init(&make_params), py::arg("t") = 5.0, py::arg("r") = 3.0, py::arg("p") = 1.0,
           py::arg("s") = 0.0, py::arg("z") = 2.5, py::arg("beta") = 0.75)
      .def_property_readonly("t", [](const GameParams& p) { return p.pd.t; })
      .def_property_readonly("r", [](const GameParams& p) { return p.pd.r; })
      .def_property_readonly("p", [](const GameParams& p) { return p.pd.p; })
      .def_property_readonly("s", [](const GameParams& p) { return p.pd.s; })
      .def_readonly("z", &GameParams::z)
      .def_readonly("beta", &GameParams::beta)
      .def_property_readonly("gamma", &GameParams::gamma)
      .def("__repr__", [](const GameParams& p) {
        return "GameParams(t=" + std::to_string(p.pd.t) + ", r=" + std::to_string(p.pd.r) +
               ", p=" + std::to_string(p.pd.p) + ", s=" + std::to_string(p.pd.s) +
               ", z=" + std::to_string(p.z) + ", beta=" + std::to_string(p.beta) + ")";
      });

  m.def("payoff_matrix",
        [](const GameParams& p, int set) { return matrix_dict(compile_payoff_matrix(set, p)); },
        py::arg("params"), py::arg("set") = 3,
        "Compile the repeated-game payoff matrix for the canonical strategy set");
  m.def("closed_form_matrix",
        [](const GameParams& p, int set) {
          return matrix_dict(set == 3 ? closed_form_matrix3(p) : closed_form_matrix4(p));
        },
        py::arg("params"), py::arg("set") = 3);

  m.def("rhs_reduced3",
        [](const GameParams& p, std::array<double, 2> x) { return rhs_reduced3(x, p); },
        py::arg("params"), py::arg("x"));
  m.def("rhs_reduced4",
        [](const GameParams& p, std::array<double, 3> x) { return rhs_reduced4(x, p); },
        py::arg("params"), py::arg("x"));
  m.def("rhs_general",
        [](std::vector<std::vector<double>> entries, std::vector<double> x) {
          PayoffMatrix m;
          for (std::size_t i = 0; i < entries.size(); ++i) {
            m.strategies.push_back("s" + std::to_string(i + 1));
            if (entries[i].size() != entries.size()) {
              fail(Errc::dimension_mismatch, "payoff matrix must be square");
            }
            m.entries.insert(m.entries.end(), entries[i].begin(), entries[i].end());
          }
          return rhs_general(x, m);
        },
        py::arg("entries"), py::arg("x"),
        "Replicator field of an arbitrary square payoff matrix on the full simplex");
  m.def("time_rescale", &time_rescale, py::arg("params"));

  m.def("integrate",
        [](const GameParams& p, std::vector<double> x0, int set, double step, double max_time,
           double convergence_tol) {
          const auto cfg = make_config(step, max_time, convergence_tol);
          if (set == 3) {
            if (x0.size() != 2) fail(Errc::dimension_mismatch, "seed needs 2 components");
            return trajectory_dict(integrate_reduced3({x0[0], x0[1]}, p, cfg));
          }
          if (x0.size() != 3) fail(Errc::dimension_mismatch, "seed needs 3 components");
          return trajectory_dict(integrate_reduced4({x0[0], x0[1], x0[2]}, p, cfg));
        },
        py::arg("params"), py::arg("x0"), py::arg("set") = 3, py::arg("step") = 1e-2,
        py::arg("max_time") = 200.0, py::arg("convergence_tol") = 1e-10,
        "Integrate the reduced replicator field (rescaled time)");

  m.def("fixed_points",
        [](const GameParams& p, int set) {
          py::list out;
          const auto reports = set == 3 ? fixed_points_3(p) : fixed_points_4(p);
          for (const auto& r : reports) out.append(report_dict(r));
          return out;
        },
        py::arg("params"), py::arg("set") = 3);

  m.def("partnership_census", &partnership_census, py::arg("params"),
        "Shares in cooperating partnerships, defecting partnerships, and alone");

  m.def("boundary_values",
        [](double beta, double z) {
          const auto bv = boundary_values(beta, z);
          return std::array<double, 5>{bv.b1, bv.b2, bv.b3, bv.b4, bv.b5};
        },
        py::arg("beta"), py::arg("z"));
  m.def("classify_region",
        [](double beta, double z) { return classify_region(beta, z).name(); }, py::arg("beta"),
        py::arg("z"));
  m.def("atlas_sweep",
        [](double beta_lo, double beta_hi, double z_lo, double z_hi, int resolution) {
          const auto grid = atlas_sweep(beta_lo, beta_hi, z_lo, z_hi, resolution);
          std::vector<std::string> names;
          names.reserve(grid.cells.size());
          for (const auto& cell : grid.cells) names.push_back(cell.name());
          py::dict d;
          d["betas"] = grid.betas;
          d["zs"] = grid.zs;
          d["regions"] = names;
          return d;
        },
        py::arg("beta_lo") = 0.0, py::arg("beta_hi") = 1.0, py::arg("z_lo") = 0.0,
        py::arg("z_hi") = 4.0, py::arg("resolution") = 200);

  m.def("to_kl",
        [](std::array<double, 2> x) {
          const auto kl = to_kl(x);
          return std::array<double, 2>{kl.k, kl.l};
        },
        py::arg("x"));
  m.def("from_kl",
        [](double k, double l) { return from_kl({k, l}); }, py::arg("k"), py::arg("l"));
  m.def("invariant_log",
        [](const GameParams& p, std::array<double, 2> x) { return invariant_log(x, p); },
        py::arg("params"), py::arg("x"),
        "Log of the quantity conserved along 3-strategy trajectories");

  m.attr("__version__") = "0.1.0";
}
