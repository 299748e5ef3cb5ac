#include "ipdx/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ipdx {

namespace {

using Complex = std::complex<double>;

constexpr double kDegenerateTol = 1e-12;

bool eig_before(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Roots of x^2 + bx + c, computed the cancellation-safe way.
std::array<Complex, 2> quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    const double r1 = q;
    const double r2 = (q != 0.0) ? c / q : -b - q;
    return {Complex(r1, 0.0), Complex(r2, 0.0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex(-0.5 * b, im), Complex(-0.5 * b, -im)};
}

// Roots of x^3 + px^2 + qx + r.  An exactly-zero constant term factors out an
// exact zero root, which the fixed points here rely on.
std::array<Complex, 3> cubic_roots(double p, double q, double r) {
  if (r == 0.0) {
    const auto qr = quadratic_roots(p, q);
    return {Complex(0.0, 0.0), qr[0], qr[1]};
  }
  const double P = q - p * p / 3.0;
  const double Q = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
  const double shift = -p / 3.0;
  const double disc = 0.25 * Q * Q + P * P * P / 27.0;
  if (std::abs(P) < 1e-300 && std::abs(Q) < 1e-300) {
    return {Complex(shift, 0.0), Complex(shift, 0.0), Complex(shift, 0.0)};
  }
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-0.5 * Q + sq);
    const double v = std::cbrt(-0.5 * Q - sq);
    const double real_root = u + v + shift;
    const double re = -0.5 * (u + v) + shift;
    const double im = 0.5 * std::numbers::sqrt3 * (u - v);
    return {Complex(real_root, 0.0), Complex(re, im), Complex(re, -im)};
  }
  const double m = 2.0 * std::sqrt(-P / 3.0);
  const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
  const double theta = std::acos(arg);
  std::array<Complex, 3> roots;
  for (int k = 0; k < 3; ++k) {
    roots[k] = Complex(m * std::cos((theta - 2.0 * std::numbers::pi * k) / 3.0) + shift, 0.0);
  }
  return roots;
}

double cnorm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& c : v) acc += std::norm(c);
  return std::sqrt(acc);
}

void canonicalize(std::vector<Complex>& v) {
  const double n = cnorm(v);
  if (n == 0.0) return;
  std::size_t lead = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[lead])) lead = i;
  }
  const Complex phase = std::conj(v[lead]) / std::abs(v[lead]);
  for (auto& c : v) c = c * phase / n;
  for (auto& c : v) {
    if (std::abs(c.imag()) < 1e-14 * (1.0 + std::abs(c.real()))) c = Complex(c.real(), 0.0);
  }
}

std::array<Complex, 3> cross(std::span<const Complex> u, std::span<const Complex> v) {
  return {
      u[1] * v[2] - u[2] * v[1],
      u[2] * v[0] - u[0] * v[2],
      u[0] * v[1] - u[1] * v[0],
  };
}

// Gaussian elimination with partial pivoting; free variables are set to zero.
// Returns false when the system is inconsistent at the pivot tolerance.
bool solve_linear(std::vector<std::vector<Complex>> m, std::vector<Complex> rhs,
                  std::vector<Complex>& out) {
  const std::size_t n = rhs.size();
  std::vector<int> pivot_col(n, -1);
  std::size_t row = 0;
  double scale = 0.0;
  for (const auto& r : m) {
    for (const auto& c : r) scale = std::max(scale, std::abs(c));
  }
  const double tol = 1e-10 * (scale + 1.0);
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t best = row;
    for (std::size_t i = row + 1; i < n; ++i) {
      if (std::abs(m[i][col]) > std::abs(m[best][col])) best = i;
    }
    if (std::abs(m[best][col]) <= tol) continue;
    std::swap(m[row], m[best]);
    std::swap(rhs[row], rhs[best]);
    for (std::size_t i = row + 1; i < n; ++i) {
      const Complex factor = m[i][col] / m[row][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= factor * m[row][j];
      rhs[i] -= factor * rhs[row];
    }
    pivot_col[row] = static_cast<int>(col);
    ++row;
  }
  for (std::size_t i = row; i < n; ++i) {
    if (std::abs(rhs[i]) > 1e-6 * (scale + 1.0)) return false;
  }
  out.assign(n, Complex(0.0, 0.0));
  for (std::size_t i = row; i-- > 0;) {
    const int col = pivot_col[i];
    Complex acc = rhs[i];
    for (std::size_t j = col + 1; j < n; ++j) acc -= m[i][j] * out[j];
    out[col] = acc / m[i][col];
  }
  return true;
}

std::vector<std::vector<Complex>> shifted(std::span<const double> m, int n, Complex lambda) {
  std::vector<std::vector<Complex>> b(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      b[i][j] = Complex(m[i * n + j], 0.0) - (i == j ? lambda : Complex(0.0, 0.0));
    }
  }
  return b;
}

// Null-space direction of (m - lambda I); `repeat_index` selects independent
// basis vectors when an eigenvalue has a multi-dimensional eigenspace.
std::vector<Complex> null_direction(std::span<const double> m, int n, Complex lambda,
                                    int repeat_index, bool& defective) {
  const auto b = shifted(m, n, lambda);
  double bscale = 0.0;
  for (const auto& r : b) {
    for (const auto& c : r) bscale = std::max(bscale, std::abs(c));
  }
  const double tol = 1e-9 * (bscale + 1.0);
  defective = false;

  if (n == 2) {
    const std::vector<Complex> cand0{b[0][1], -b[0][0]};
    const std::vector<Complex> cand1{b[1][1], -b[1][0]};
    const double n0 = cnorm(cand0);
    const double n1 = cnorm(cand1);
    if (n0 <= tol && n1 <= tol) {
      // m == lambda I: the whole plane.
      std::vector<Complex> v(2, Complex(0.0, 0.0));
      v[repeat_index % 2] = 1.0;
      return v;
    }
    std::vector<Complex> v = (n0 >= n1) ? cand0 : cand1;
    if (repeat_index > 0) {
      // One shared direction: hand back a generalized one when possible.
      std::vector<Complex> w;
      defective = true;
      std::vector<Complex> unit = v;
      canonicalize(unit);
      if (solve_linear(b, unit, w) && cnorm(w) > 0.0) return w;
    }
    return v;
  }

  std::vector<std::vector<Complex>> cands;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pr : pairs) {
    const auto c = cross(b[pr[0]], b[pr[1]]);
    cands.push_back({c[0], c[1], c[2]});
  }
  std::sort(cands.begin(), cands.end(),
            [](const auto& x, const auto& y) { return cnorm(x) > cnorm(y); });
  if (cnorm(cands[0]) > tol * (bscale + 1.0)) {
    // Rank 2: a one-dimensional eigenspace.
    if (repeat_index > 0) {
      std::vector<Complex> w;
      defective = true;
      std::vector<Complex> unit = cands[0];
      canonicalize(unit);
      if (solve_linear(b, unit, w) && cnorm(w) > 0.0) return w;
    }
    return cands[0];
  }

  // Rank <= 1.
  std::size_t lead_row = 0;
  double lead = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double nn = cnorm(b[i]);
    if (nn > lead) {
      lead = nn;
      lead_row = i;
    }
  }
  if (lead <= tol) {
    std::vector<Complex> v(3, Complex(0.0, 0.0));
    v[repeat_index % 3] = 1.0;
    return v;
  }
  const auto& u = b[lead_row];
  std::vector<std::vector<Complex>> basis{
      {-u[1], u[0], Complex(0.0, 0.0)},
      {-u[2], Complex(0.0, 0.0), u[0]},
      {Complex(0.0, 0.0), -u[2], u[1]},
  };
  std::sort(basis.begin(), basis.end(),
            [](const auto& x, const auto& y) { return cnorm(x) > cnorm(y); });
  if (repeat_index == 0) return basis[0];
  const auto second = cross(u, basis[0]);
  return {second[0], second[1], second[2]};
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::asymptotically_stable: return "asymptotically-stable";
    case Stability::unstable: return "unstable";
    case Stability::saddle: return "saddle";
    case Stability::non_hyperbolic: return "non-hyperbolic";
  }
  return "?";
}

const char* to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::vertex: return "vertex";
    case FixedPointKind::edge: return "edge";
    case FixedPointKind::interior: return "interior";
    case FixedPointKind::fixed_line: return "fixed-line";
  }
  return "?";
}

Stability classify_stability(std::span<const std::complex<double>> eigenvalues, double tol) {
  bool any_zero = false;
  bool any_pos = false;
  bool any_neg = false;
  for (const auto& ev : eigenvalues) {
    const double re = ev.real();
    if (std::abs(re) <= tol) {
      any_zero = true;
    } else if (re > 0.0) {
      any_pos = true;
    } else {
      any_neg = true;
    }
  }
  if (any_zero) return Stability::non_hyperbolic;
  if (any_pos && any_neg) return Stability::saddle;
  return any_pos ? Stability::unstable : Stability::asymptotically_stable;
}

std::vector<EigenPair> eigen_small(std::span<const double> m, int n) {
  if ((n != 2 && n != 3) || m.size() != static_cast<std::size_t>(n * n)) {
    fail(Errc::bad_argument, "eigen_small handles 2x2 and 3x3 matrices");
  }
  std::vector<Complex> roots;
  if (n == 2) {
    const double tr = m[0] + m[3];
    const double det = m[0] * m[3] - m[1] * m[2];
    const auto r = quadratic_roots(-tr, det);
    roots.assign(r.begin(), r.end());
  } else {
    const double tr = m[0] + m[4] + m[8];
    const double m2 = (m[4] * m[8] - m[5] * m[7]) + (m[0] * m[8] - m[2] * m[6]) +
                      (m[0] * m[4] - m[1] * m[3]);
    const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                       m[2] * (m[3] * m[7] - m[4] * m[6]);
    const auto r = cubic_roots(-tr, m2, -det);
    roots.assign(r.begin(), r.end());
  }
  std::sort(roots.begin(), roots.end(), eig_before);

  double scale = 0.0;
  for (double c : m) scale = std::max(scale, std::abs(c));
  const double same_tol = 1e-9 * (scale + 1.0);

  std::vector<EigenPair> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    int repeat_index = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(roots[j] - roots[i]) <= same_tol) ++repeat_index;
    }
    EigenPair pair;
    pair.value = roots[i];
    pair.vector = null_direction(m, n, roots[i], repeat_index, pair.defective);
    canonicalize(pair.vector);
    out.push_back(std::move(pair));
  }
  return out;
}

std::array<double, 4> jacobian_reduced3(const std::array<double, 2>& x, const GameParams& p) {
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  const double g = p.gamma();
  const double x1 = x[0], x2 = x[1];
  const double s1 = c * x1 * x1 + (c + f - a) * x1 * x2 + (f - b) * x2 * x2 - c * x1 - f * x2;
  const double s2 = c * x1 * x1 + (c + f - a) * x1 * x2 + (f - b) * x2 * x2 + (a - c) * x1 +
                    (b - f) * x2;
  const double d1 = 2.0 * c * x1 + (c + f - a) * x2;
  const double d2 = (c + f - a) * x1 + 2.0 * (f - b) * x2;
  return {
      (s1 + x1 * (d1 - c)) / g, (x1 * (d2 - f)) / g,
      (x2 * (d1 + a - c)) / g, (s2 + x2 * (d2 + b - f)) / g,
  };
}

std::array<double, 9> jacobian_reduced4(const std::array<double, 3>& x, const GameParams& p) {
  const double g = p.gamma();
  const double z = p.z;
  const auto& pd = p.pd;
  const double x1 = x[0], x2 = x[1], x3 = x[2];

  const std::array<std::array<double, 3>, 3> grad = {{
      {pd.r - z, pd.s * g + p.beta * z - z, pd.r - z},
      {pd.t * g + p.beta * z - z, pd.p - z, pd.t - z},
      {pd.r - z, pd.s - z, pd.r - z},
  }};
  const std::array<double, 3> u = {
      grad[0][0] * x1 + grad[0][1] * x2 + grad[0][2] * x3,
      grad[1][0] * x1 + grad[1][1] * x2 + grad[1][2] * x3,
      grad[2][0] * x1 + grad[2][1] * x2 + grad[2][2] * x3,
  };
  const std::array<double, 3> xs = {x1, x2, x3};
  const double mean = x1 * u[0] + x2 * u[1] + x3 * u[2];
  std::array<double, 3> dmean{};
  for (int j = 0; j < 3; ++j) {
    dmean[j] = u[j];
    for (int k = 0; k < 3; ++k) dmean[j] += xs[k] * grad[k][j];
  }
  std::array<double, 9> jac{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double entry = xs[i] * (grad[i][j] - dmean[j]);
      if (i == j) entry += u[i] - mean;
      jac[i * 3 + j] = entry / g;
    }
  }
  return jac;
}

std::vector<double> finite_difference_jacobian(const VectorField& field,
                                               std::span<const double> x, double h) {
  const std::size_t n = x.size();
  std::vector<double> jac(n * n, 0.0);
  std::vector<double> lo(x.begin(), x.end());
  std::vector<double> hi(x.begin(), x.end());
  for (std::size_t j = 0; j < n; ++j) {
    hi[j] = x[j] + h;
    lo[j] = x[j] - h;
    const auto fp = field(hi);
    const auto fm = field(lo);
    for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
    hi[j] = x[j];
    lo[j] = x[j];
  }
  return jac;
}

namespace {

struct ClosedForm {
  std::vector<Complex> values;
  std::vector<std::vector<double>> vectors;  // entries may be empty
};

void sort_closed_form(ClosedForm& cf) {
  std::vector<std::size_t> order(cf.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&cf](std::size_t a, std::size_t b) {
    return eig_before(cf.values[a], cf.values[b]);
  });
  ClosedForm sorted;
  for (std::size_t idx : order) {
    sorted.values.push_back(cf.values[idx]);
    sorted.vectors.push_back(cf.vectors[idx]);
  }
  cf = std::move(sorted);
}

bool in_unit_simplex(std::span<const double> coords) {
  double sum = 0.0;
  for (double c : coords) {
    if (c < -kDegenerateTol) return false;
    sum += c;
  }
  return sum <= 1.0 + kDegenerateTol;
}

FixedPointReport make_report3(std::vector<double> loc, FixedPointKind kind, ClosedForm cf,
                              const GameParams& p) {
  FixedPointReport r;
  r.location = std::move(loc);
  r.kind = kind;
  r.exists_in_simplex = in_unit_simplex(r.location);
  const auto jac = jacobian_reduced3({r.location[0], r.location[1]}, p);
  r.jacobian.assign(jac.begin(), jac.end());
  r.eigenpairs = eigen_small(r.jacobian, 2);
  std::vector<Complex> values;
  for (const auto& e : r.eigenpairs) values.push_back(e.value);
  r.stability = classify_stability(values);
  sort_closed_form(cf);
  r.closed_form_eigenvalues = std::move(cf.values);
  r.closed_form_eigenvectors = std::move(cf.vectors);
  return r;
}

FixedPointReport make_report4(std::vector<double> loc, FixedPointKind kind, ClosedForm cf,
                              const GameParams& p, std::optional<double> alpha = std::nullopt) {
  FixedPointReport r;
  r.location = std::move(loc);
  r.kind = kind;
  r.alpha = alpha;
  r.exists_in_simplex = in_unit_simplex(r.location);
  const auto jac = jacobian_reduced4({r.location[0], r.location[1], r.location[2]}, p);
  r.jacobian.assign(jac.begin(), jac.end());
  r.eigenpairs = eigen_small(r.jacobian, 3);
  std::vector<Complex> values;
  for (const auto& e : r.eigenpairs) values.push_back(e.value);
  r.stability = classify_stability(values);
  sort_closed_form(cf);
  r.closed_form_eigenvalues = std::move(cf.values);
  r.closed_form_eigenvectors = std::move(cf.vectors);
  return r;
}

}  // namespace

bool polymorphic_degenerate(const GameParams& p) {
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  (void)c;
  (void)f;
  return std::abs(a - b) < kDegenerateTol;
}

std::vector<FixedPointReport> fixed_points_3(const GameParams& p) {
  validate_params(p);
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  const double g = p.gamma();

  std::vector<FixedPointReport> out;
  out.push_back(make_report3({0.0, 0.0}, FixedPointKind::vertex,
                             {{Complex(0.0), Complex(0.0)}, {{1.0, 0.0}, {0.0, 1.0}}}, p));
  out.push_back(make_report3({1.0, 0.0}, FixedPointKind::vertex,
                             {{Complex(c / g), Complex(a / g)}, {{1.0, 0.0}, {-1.0, 1.0}}}, p));
  out.push_back(make_report3({0.0, 1.0}, FixedPointKind::vertex,
                             {{Complex(-b / g), Complex((f - b) / g)}, {{1.0, -1.0}, {0.0, 1.0}}},
                             p));

  const double d = a - b;
  if (std::abs(d) >= kDegenerateTol) {
    out.push_back(make_report3(
        {-b / d, a / d}, FixedPointKind::edge,
        {{Complex(a * b / (g * d)), Complex((a * f - b * c) / (g * d))},
         {{-1.0, 1.0}, {b, -a}}},
        p));
  }
  return out;
}

std::vector<FixedPointReport> fixed_points_4(const GameParams& p) {
  validate_params(p);
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  const double g = p.gamma();
  const double z = p.z;
  const auto& pd = p.pd;
  const bool default_pd = pd.is_default();

  std::vector<FixedPointReport> out;
  out.push_back(make_report4({0.0, 0.0, 0.0}, FixedPointKind::vertex,
                             {{Complex(0.0), Complex(0.0), Complex(0.0)},
                              {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
                             p));
  out.push_back(make_report4(
      {0.0, 1.0, 0.0}, FixedPointKind::vertex,
      {{Complex((pd.s * g + p.beta * z - pd.p) / g), Complex((z - pd.p) / g),
        Complex((pd.s - pd.p) / g)},
       {{-1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 1.0, -1.0}}},
      p));
  out.push_back(make_report4({1.0, 0.0, 0.0}, FixedPointKind::vertex,
                             {{Complex(0.0), Complex(a / g), Complex(c / g)},
                              {{1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}}},
                             p));
  out.push_back(make_report4(
      {0.0, 0.0, 1.0}, FixedPointKind::vertex,
      {{Complex(0.0), Complex((pd.t - pd.r) / g), Complex((z - pd.r) / g)},
       {{1.0, 0.0, -1.0}, {0.0, 1.0, -1.0}, {0.0, 0.0, 1.0}}},
      p));

  for (const double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double invade_d = ((pd.t - pd.r) + alpha * p.beta * (z - pd.t)) / g;
    std::vector<double> e2;
    if (default_pd) {
      const double denom = 2.0 - 5.0 * alpha * p.beta + alpha * p.beta * z;
      if (std::abs(denom) > kDegenerateTol) {
        e2 = {alpha * (p.beta * z - 2.0 * alpha * p.beta * z + 5.0 * alpha * p.beta - 2.0) / denom,
              1.0,
              (alpha - 1.0) * (2.0 * alpha * p.beta * z - 5.0 * alpha * p.beta + 2.0) / denom};
      }
    }
    out.push_back(make_report4(
        {alpha, 0.0, 1.0 - alpha}, FixedPointKind::fixed_line,
        {{Complex(0.0), Complex(invade_d), Complex((z - pd.r) / g)},
         {{1.0, 0.0, -1.0}, std::move(e2), {alpha, 0.0, 1.0 - alpha}}},
        p, alpha));
  }

  const double d = a - b;
  if (std::abs(d) >= kDegenerateTol) {
    std::vector<double> e3;
    if (default_pd) {
      e3 = {p.beta * z - 1.0, p.beta * (5.0 - 3.0 * z), 2.0 * p.beta * z - 5.0 * p.beta + 1.0};
    }
    out.push_back(make_report4(
        {-b / d, a / d, 0.0}, FixedPointKind::edge,
        {{Complex(a * b / (g * d)), Complex((a * f - b * c) / (g * d)),
          Complex(-a * p.beta * (z - pd.s) / (g * d))},
         {{-1.0, 1.0, 0.0}, {b, -a, 0.0}, std::move(e3)}},
        p));
  }
  return out;
}

std::array<double, 3> partnership_census(const GameParams& p) {
  validate_params(p);
  const auto [a, b, c, f] = AbcfCoefficients::from(p);
  const double d = a - b;
  if (std::abs(d) < kDegenerateTol) {
    fail(Errc::not_in_region_vi, "the mixture point is degenerate at these parameters");
  }
  const double x = -b / d;
  if (!(x > 0.0 && x < 1.0)) {
    fail(Errc::not_in_region_vi, "the mixture point lies outside the simplex");
  }
  const double g = p.gamma();
  const double lam1 = a * b / (g * d);
  const double lam2 = (a * f - b * c) / (g * d);
  if (!(lam1 < 0.0 && lam2 < 0.0)) {
    fail(Errc::not_in_region_vi, "the mixture point is not asymptotically stable");
  }
  return {x * x, (1.0 - x) * (1.0 - x), 2.0 * x * (1.0 - x)};
}

}  // namespace ipdx
