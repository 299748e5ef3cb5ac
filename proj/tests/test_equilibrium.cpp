#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ipdx/equilibrium.hpp"
#include "support.hpp"

using namespace ipdx;
using test::params;
using test::rel_close;

namespace {

double cosine(const std::vector<std::complex<double>>& u, const std::vector<double>& v) {
  std::complex<double> dot{0.0, 0.0};
  double nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += std::norm(u[i]);
    nv += v[i] * v[i];
  }
  return std::abs(dot) / std::sqrt(nu * nv);
}

// Closed-form eigenvalues and directions are compared index-wise after the
// shared sort; directions are skipped where eigenvalues nearly collide, since
// the basis is ill-conditioned there.
void check_against_closed_form(const FixedPointReport& r, double value_tol,
                               double vector_tol) {
  REQUIRE(r.closed_form_eigenvalues.size() == r.eigenpairs.size());
  double scale = 1.0;
  for (const auto& cf : r.closed_form_eigenvalues) scale = std::max(scale, std::abs(cf));
  for (std::size_t i = 0; i < r.eigenpairs.size(); ++i) {
    const auto cf = r.closed_form_eigenvalues[i];
    CHECK(std::abs(r.eigenpairs[i].value - cf) <= value_tol * scale);
    if (r.closed_form_eigenvectors[i].empty()) continue;
    bool clustered = false;
    for (std::size_t j = 0; j < r.closed_form_eigenvalues.size(); ++j) {
      if (j != i && std::abs(r.closed_form_eigenvalues[j] - cf) < 1e-6 * scale) clustered = true;
    }
    if (clustered) continue;
    CHECK(cosine(r.eigenpairs[i].vector, r.closed_form_eigenvectors[i]) > 1.0 - vector_tol);
  }
}

}  // namespace

TEST_CASE("eigen_small on simple matrices") {
  const std::vector<double> ident{1.0, 0.0, 0.0, 1.0};
  const auto ei = eigen_small(ident, 2);
  CHECK(ei[0].value == std::complex<double>(1.0, 0.0));
  CHECK(ei[1].value == std::complex<double>(1.0, 0.0));
  CHECK(cosine(ei[0].vector, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(cosine(ei[1].vector, {0.0, 1.0}) == doctest::Approx(1.0));

  const std::vector<double> rotation{0.0, -1.0, 1.0, 0.0};
  const auto er = eigen_small(rotation, 2);
  CHECK(er[0].value.real() == doctest::Approx(0.0));
  CHECK(er[0].value.imag() == doctest::Approx(1.0));
  CHECK(er[1].value.imag() == doctest::Approx(-1.0));

  const std::vector<double> upper{2.0, 1.0, 0.0, 3.0};
  const auto eu = eigen_small(upper, 2);
  CHECK(eu[0].value.real() == doctest::Approx(3.0));
  CHECK(eu[1].value.real() == doctest::Approx(2.0));

  const std::vector<double> diag3{1.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 4.0};
  const auto ed = eigen_small(diag3, 3);
  CHECK(ed[0].value.real() == doctest::Approx(4.0));
  CHECK(ed[1].value.real() == doctest::Approx(1.0));
  CHECK(ed[2].value.real() == doctest::Approx(-2.0));
  CHECK(cosine(ed[0].vector, {0.0, 0.0, 1.0}) == doctest::Approx(1.0));

  CHECK_THROWS_AS(eigen_small(ident, 4), Error);
}

TEST_CASE("eigen_small flags defective matrices") {
  const std::vector<double> jordan{1.0, 1.0, 0.0, 1.0};
  const auto e = eigen_small(jordan, 2);
  CHECK(e[0].value.real() == doctest::Approx(1.0));
  CHECK(e[1].value.real() == doctest::Approx(1.0));
  CHECK((e[0].defective || e[1].defective));
}

TEST_CASE("eigen_small handles a complex pair in three dimensions") {
  // Planar rotation stacked on a stretching axis.
  const std::vector<double> m{0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0};
  const auto e = eigen_small(m, 3);
  CHECK(e[0].value.real() == doctest::Approx(2.0));
  CHECK(e[1].value.imag() == doctest::Approx(1.0));
  CHECK(e[2].value.imag() == doctest::Approx(-1.0));
  CHECK(cosine(e[0].vector, {0.0, 0.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("eigenpairs satisfy the residual bound on random matrices") {
  auto rng = test::make_rng(26);
  std::uniform_real_distribution<double> entry(-3.0, 3.0);
  auto residual = [](std::span<const double> m, int n, const EigenPair& pair) {
    double num = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> acc{0.0, 0.0};
      for (int j = 0; j < n; ++j) acc += m[i * n + j] * pair.vector[j];
      acc -= pair.value * pair.vector[i];
      num += std::norm(acc);
    }
    return std::sqrt(num);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 2 ? 2 : 3;
    std::vector<double> m(n * n);
    double scale = 0.0;
    for (double& v : m) {
      v = entry(rng);
      scale = std::max(scale, std::abs(v));
    }
    for (const auto& pair : eigen_small(m, n)) {
      if (pair.defective) continue;
      CHECK(residual(m, n, pair) < 1e-8 * (scale + 1.0));
    }
  }
}

TEST_CASE("fixed-point eigenpairs satisfy the residual bound") {
  auto rng = test::make_rng(27);
  std::uniform_real_distribution<double> beta_draw(0.05, 0.95);
  std::uniform_real_distribution<double> z_draw(0.2, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    auto check = [](const FixedPointReport& r, int n) {
      double scale = 1.0;
      for (double v : r.jacobian) scale = std::max(scale, std::abs(v));
      for (const auto& pair : r.eigenpairs) {
        if (pair.defective) continue;
        double num = 0.0;
        for (int i = 0; i < n; ++i) {
          std::complex<double> acc{0.0, 0.0};
          for (int j = 0; j < n; ++j) acc += r.jacobian[i * n + j] * pair.vector[j];
          acc -= pair.value * pair.vector[i];
          num += std::norm(acc);
        }
        CHECK(std::sqrt(num) < 1e-8 * scale);
      }
    };
    for (const auto& r : fixed_points_3(p)) check(r, 2);
    for (const auto& r : fixed_points_4(p)) check(r, 3);
  }
}

TEST_CASE("analytic Jacobian agrees with central differences") {
  auto rng = test::make_rng(20);
  std::uniform_real_distribution<double> beta_draw(0.05, 0.95);
  std::uniform_real_distribution<double> z_draw(0.2, 4.0);
  std::uniform_real_distribution<double> coord(0.05, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    const std::array<double, 2> x{coord(rng), coord(rng)};
    const auto jac = jacobian_reduced3(x, p);
    auto field3 = [&p](std::span<const double> q) {
      const auto v = rhs_reduced3({q[0], q[1]}, p);
      return std::vector<double>{v[0], v[1]};
    };
    const auto fd = finite_difference_jacobian(field3, std::span(x.data(), 2));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(jac[k] - fd[k]) < 1e-5);

    const std::array<double, 3> y{coord(rng), coord(rng), coord(rng)};
    const auto jac4 = jacobian_reduced4(y, p);
    auto field4 = [&p](std::span<const double> q) {
      const auto v = rhs_reduced4({q[0], q[1], q[2]}, p);
      return std::vector<double>{v[0], v[1], v[2]};
    };
    const auto fd4 = finite_difference_jacobian(field4, std::span(y.data(), 3));
    for (int k = 0; k < 9; ++k) CHECK(std::abs(jac4[k] - fd4[k]) < 1e-5);
  }
}

TEST_CASE("the all-loner vertex has an exactly zero Jacobian") {
  auto rng = test::make_rng(21);
  std::uniform_real_distribution<double> beta_draw(0.0, 0.99);
  std::uniform_real_distribution<double> z_draw(-1.0, 6.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    for (double entry : jacobian_reduced3({0.0, 0.0}, p)) CHECK(entry == 0.0);
    for (double entry : jacobian_reduced4({0.0, 0.0, 0.0}, p)) CHECK(entry == 0.0);
  }
}

TEST_CASE("three-strategy fixed points at the mixture anchor") {
  const auto reports = fixed_points_3(params(0.75, 2.5));
  REQUIRE(reports.size() == 4);

  const auto& origin = reports[0];
  CHECK(origin.location == std::vector<double>{0.0, 0.0});
  CHECK(origin.stability == Stability::non_hyperbolic);
  CHECK(origin.eigenpairs[0].value == std::complex<double>(0.0, 0.0));
  CHECK(origin.eigenpairs[1].value == std::complex<double>(0.0, 0.0));

  const auto& mixture = reports[3];
  CHECK(mixture.kind == FixedPointKind::edge);
  CHECK(mixture.exists_in_simplex);
  CHECK(mixture.location[0] == doctest::Approx(0.875).epsilon(1e-13));
  CHECK(mixture.location[1] == doctest::Approx(0.125).epsilon(1e-13));
  CHECK(mixture.location[0] + mixture.location[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mixture.stability == Stability::asymptotically_stable);
  // Closed forms: -0.4375 and -1.4375, sorted descending.
  CHECK(std::abs(mixture.closed_form_eigenvalues[0] - std::complex<double>(-0.4375, 0.0)) <
        1e-12);
  CHECK(std::abs(mixture.closed_form_eigenvalues[1] - std::complex<double>(-1.4375, 0.0)) <
        1e-12);
  CHECK(std::abs(mixture.eigenpairs[0].value.real() + 0.4375) < 1e-10);
  CHECK(std::abs(mixture.eigenpairs[1].value.real() + 1.4375) < 1e-10);
  CHECK(cosine(mixture.eigenpairs[0].vector, {-1.0, 1.0}) > 1.0 - 1e-8);
}

TEST_CASE("all-conditional vertex eigenvalues in the cooperative regime") {
  const auto reports = fixed_points_3(params(0.9, 2.5));
  const auto& vertex = reports[1];
  CHECK(vertex.location == std::vector<double>{1.0, 0.0});
  CHECK(vertex.stability == Stability::asymptotically_stable);
  // (z-3)/(1-beta) = -5 and (2-5b+bz)/(1-beta) = -2.5, sorted descending.
  CHECK(vertex.closed_form_eigenvalues[0].real() == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(vertex.closed_form_eigenvalues[1].real() == doctest::Approx(-5.0).epsilon(1e-12));
  check_against_closed_form(vertex, 1e-10, 1e-8);

  // Rescaled by gamma the eigenvalues become (-0.25, -0.5).
  const double g = time_rescale(params(0.9, 2.5));
  CHECK(g * vertex.closed_form_eigenvalues[0].real() == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(g * vertex.closed_form_eigenvalues[1].real() == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("reported fixed points are genuine zeros of the field") {
  auto rng = test::make_rng(22);
  std::uniform_real_distribution<double> beta_draw(0.05, 0.95);
  std::uniform_real_distribution<double> z_draw(0.2, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    for (const auto& r : fixed_points_3(p)) {
      if (!r.exists_in_simplex) continue;
      const auto v = rhs_reduced3({r.location[0], r.location[1]}, p);
      CHECK(std::abs(v[0]) < 1e-10);
      CHECK(std::abs(v[1]) < 1e-10);
    }
    for (const auto& r : fixed_points_4(p)) {
      if (!r.exists_in_simplex) continue;
      const auto v = rhs_reduced4({r.location[0], r.location[1], r.location[2]}, p);
      for (double c : v) CHECK(std::abs(c) < 1e-10);
    }
  }
}

TEST_CASE("mixture coordinates always sum to one") {
  auto rng = test::make_rng(23);
  std::uniform_real_distribution<double> beta_draw(0.05, 0.95);
  std::uniform_real_distribution<double> z_draw(0.2, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    if (polymorphic_degenerate(p)) continue;
    const auto reports = fixed_points_3(p);
    REQUIRE(reports.size() == 4);
    const auto& m = reports[3];
    CHECK(std::abs(m.location[0] + m.location[1] - 1.0) < 1e-12);
  }
}

TEST_CASE("numerical eigenstructure matches the closed forms across the grid") {
  for (int bi = 0; bi < 20; ++bi) {
    for (int zi = 0; zi < 20; ++zi) {
      const double beta = 0.05 + 0.9 * bi / 19.0;
      const double z = 0.2 + 3.8 * zi / 19.0;
      const auto p = params(beta, z);
      if (polymorphic_degenerate(p)) continue;
      for (const auto& r : fixed_points_3(p)) {
        check_against_closed_form(r, 1e-8, 1e-8);
      }
      for (const auto& r : fixed_points_4(p)) {
        check_against_closed_form(r, 1e-8, 1e-8);
      }
    }
  }
}

TEST_CASE("stability labels survive the time rescale") {
  auto rng = test::make_rng(24);
  std::uniform_real_distribution<double> beta_draw(0.05, 0.95);
  std::uniform_real_distribution<double> z_draw(0.2, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    const double g = time_rescale(p);
    for (const auto& r : fixed_points_3(p)) {
      std::vector<std::complex<double>> scaled;
      for (const auto& e : r.eigenpairs) scaled.push_back(e.value * g);
      // The threshold band shrinks with the values; compare with a matched tol.
      CHECK(classify_stability(scaled, kHyperbolicTol * g) == r.stability);
    }
  }
}

TEST_CASE("four-strategy fixed points: all-cooperator vertex and the fixed line") {
  const auto p = params(0.9, 2.5);
  const auto reports = fixed_points_4(p);
  REQUIRE(reports.size() == 10);  // 4 vertices + 5 line samples + mixture

  const auto& all_s = reports[3];
  CHECK(all_s.location == std::vector<double>{0.0, 0.0, 1.0});
  // (0, 2/(1-beta), (z-3)/(1-beta)) = (0, 20, -5) sorted descending.
  CHECK(all_s.closed_form_eigenvalues[0].real() == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(all_s.closed_form_eigenvalues[1].real() == doctest::Approx(0.0));
  CHECK(all_s.closed_form_eigenvalues[2].real() == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(all_s.stability == Stability::non_hyperbolic);
  bool has_unstable_direction = false;
  for (const auto& e : all_s.eigenpairs) {
    if (e.value.real() > kHyperbolicTol) has_unstable_direction = true;
  }
  CHECK(has_unstable_direction);
  check_against_closed_form(all_s, 1e-10, 1e-8);

  // The alpha = 1 end of the fixed line coincides with the all-conditional
  // vertex and shares its closed forms.
  const FixedPointReport* vertex_c = &reports[2];
  const FixedPointReport* line_end = nullptr;
  for (const auto& r : reports) {
    if (r.kind == FixedPointKind::fixed_line && r.alpha && *r.alpha == 1.0) line_end = &r;
  }
  REQUIRE(line_end != nullptr);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(line_end->closed_form_eigenvalues[i] -
                   vertex_c->closed_form_eigenvalues[i]) < 1e-12);
  }
}

TEST_CASE("four-strategy mixture keeps the cross-strategy eigenvalue") {
  const auto reports = fixed_points_4(params(0.75, 2.5));
  const auto& mixture = reports.back();
  CHECK(mixture.kind == FixedPointKind::edge);
  CHECK(mixture.location[0] == doctest::Approx(0.875).epsilon(1e-13));
  CHECK(mixture.location[1] == doctest::Approx(0.125).epsilon(1e-13));
  CHECK(mixture.location[2] == 0.0);
  bool found = false;
  for (const auto& cf : mixture.closed_form_eigenvalues) {
    if (std::abs(cf - std::complex<double>(-0.9375, 0.0)) < 1e-12) found = true;
  }
  CHECK(found);
  CHECK(mixture.stability == Stability::asymptotically_stable);
  check_against_closed_form(mixture, 1e-10, 1e-8);
}

TEST_CASE("degenerate mixture denominator drops the mixture report") {
  const auto p = params(0.5, 1.5);  // 2*beta*z - 5*beta + 1 = 0
  CHECK(polymorphic_degenerate(p));
  CHECK(fixed_points_3(p).size() == 3);
  CHECK(fixed_points_4(p).size() == 9);
}

TEST_CASE("partnership census at the anchor and its binomial identity") {
  const auto census = partnership_census(params(0.75, 2.5));
  CHECK(census[0] == doctest::Approx(0.765625).epsilon(1e-14));
  CHECK(census[1] == doctest::Approx(0.015625).epsilon(1e-14));
  CHECK(census[2] == doctest::Approx(0.21875).epsilon(1e-14));
  CHECK(census[0] + census[1] + census[2] == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(partnership_census(params(0.9, 2.5)),
                       doctest::Contains("NotInRegionVI"), Error);
  CHECK_THROWS_AS(partnership_census(params(0.1, 3.5)), Error);
}

TEST_CASE("census components sum to one across the stable-mixture window") {
  auto rng = test::make_rng(25);
  std::uniform_real_distribution<double> beta_draw(0.6, 0.99);
  std::uniform_real_distribution<double> z_draw(1.0, 3.0);
  int accepted = 0;
  while (accepted < 100) {
    const auto p = params(beta_draw(rng), z_draw(rng));
    std::array<double, 3> census;
    try {
      census = partnership_census(p);
    } catch (const Error&) {
      continue;
    }
    ++accepted;
    CHECK(std::abs(census[0] + census[1] + census[2] - 1.0) < 1e-14);
    for (double c : census) CHECK(c >= 0.0);
  }
}
