#include "ipdx/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ipdx/trajectory_invariant.hpp"

namespace ipdx {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

nlohmann::json complex_json(const std::complex<double>& c) {
  return nlohmann::json::array({c.real(), c.imag()});
}

}  // namespace

nlohmann::json params_json(const GameParams& p) {
  return {
      {"t", p.pd.t}, {"r", p.pd.r}, {"p", p.pd.p}, {"s", p.pd.s},
      {"z", p.z},    {"beta", p.beta},
  };
}

nlohmann::json to_json(const PayoffMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return {{"strategies", m.strategies}, {"entries", std::move(rows)}};
}

nlohmann::json to_json(const FixedPointReport& r) {
  nlohmann::json j;
  j["location"] = r.location;
  j["kind"] = to_string(r.kind);
  j["exists_in_simplex"] = r.exists_in_simplex;
  if (r.alpha) j["alpha"] = *r.alpha;
  j["jacobian"] = r.jacobian;
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json vectors = nlohmann::json::array();
  for (const auto& pair : r.eigenpairs) {
    values.push_back(complex_json(pair.value));
    nlohmann::json vec = nlohmann::json::array();
    for (const auto& c : pair.vector) vec.push_back(complex_json(c));
    vectors.push_back(std::move(vec));
  }
  j["eigenvalues"] = std::move(values);
  j["eigenvectors"] = std::move(vectors);
  j["stability"] = to_string(r.stability);
  if (!r.closed_form_eigenvalues.empty()) {
    nlohmann::json cf = nlohmann::json::array();
    nlohmann::json deltas = nlohmann::json::array();
    for (std::size_t i = 0; i < r.closed_form_eigenvalues.size(); ++i) {
      cf.push_back(complex_json(r.closed_form_eigenvalues[i]));
      deltas.push_back(std::abs(r.eigenpairs[i].value - r.closed_form_eigenvalues[i]));
    }
    j["closed_form_eigenvalues"] = std::move(cf);
    j["closed_form_delta"] = std::move(deltas);
  }
  return j;
}

nlohmann::json fixed_points_json(std::span<const FixedPointReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  nlohmann::json line;
  std::ptrdiff_t line_slot = -1;
  for (const auto& r : reports) {
    if (r.kind == FixedPointKind::fixed_line) {
      if (line.is_null()) {
        line_slot = static_cast<std::ptrdiff_t>(arr.size());
        line["kind"] = to_string(FixedPointKind::fixed_line);
        line["alphas"] = nlohmann::json::array();
        line["samples"] = nlohmann::json::array();
      }
      line["alphas"].push_back(r.alpha.value_or(0.0));
      line["samples"].push_back(to_json(r));
      continue;
    }
    arr.push_back(to_json(r));
  }
  if (line_slot >= 0) arr.insert(arr.begin() + line_slot, std::move(line));
  return arr;
}

nlohmann::json to_json(const Trajectory& t) {
  nlohmann::json j;
  j["t"] = t.times;
  const std::size_t dim = t.points.empty() ? 0 : t.points.front().size();
  for (std::size_t c = 0; c < dim; ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (const auto& pt : t.points) col.push_back(pt[c]);
    j["x" + std::to_string(c + 1)] = std::move(col);
  }
  j["terminal_flag"] = to_string(t.terminal);
  return j;
}

nlohmann::json to_json(const Portrait& p) {
  nlohmann::json j;
  j["params"] = params_json(p.params);
  j["strategy_count"] = p.strategy_count;
  if (p.region) j["region"] = p.region->name();
  j["fixed_points"] = fixed_points_json(p.fixed_points);
  nlohmann::json trajs = nlohmann::json::array();
  for (const auto& t : p.trajectories) trajs.push_back(to_json(t));
  j["trajectories"] = std::move(trajs);
  return j;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  const std::size_t dim = t.points.empty() ? 0 : t.points.front().size();
  os << "t";
  for (std::size_t c = 0; c < dim; ++c) os << ",x" << c + 1;
  os << "\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    os << format_double(t.times[i]);
    for (std::size_t c = 0; c < dim; ++c) os << "," << format_double(t.points[i][c]);
    os << "\n";
  }
  return os.str();
}

std::string trajectory_audit_csv(const Trajectory& t, const GameParams& p) {
  std::ostringstream os;
  os << "t,x1,x2,logC\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    const auto& pt = t.points[i];
    const double logc = pt.size() == 3 ? invariant_log_shares({pt[0], pt[1], pt[2]}, p)
                                       : invariant_log({pt[0], pt[1]}, p);
    os << format_double(t.times[i]) << "," << format_double(pt[0]) << ","
       << format_double(pt[1]) << "," << format_double(logc) << "\n";
  }
  return os.str();
}

std::string atlas_csv(const AtlasGrid& grid) {
  std::ostringstream os;
  os << "beta,z,region\n";
  for (std::size_t zi = 0; zi < grid.zs.size(); ++zi) {
    for (std::size_t bi = 0; bi < grid.betas.size(); ++bi) {
      os << format_double(grid.betas[bi]) << "," << format_double(grid.zs[zi]) << ","
         << grid.at(static_cast<int>(zi), static_cast<int>(bi)).name() << "\n";
    }
  }
  return os.str();
}

std::string payoff_csv(const PayoffMatrix& m) {
  std::ostringstream os;
  os << "strategy";
  for (const auto& name : m.strategies) os << "," << name;
  os << "\n";
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << m.strategies[i];
    for (std::size_t j = 0; j < n; ++j) os << "," << format_double(m.at(i, j));
    os << "\n";
  }
  return os.str();
}

}  // namespace ipdx
