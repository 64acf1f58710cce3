#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "imcf/geometry.hpp"

using namespace imcf;
using imcf::test::conformal_metric;
using imcf::test::constant_sym;
using imcf::test::random_spd_field;
using imcf::test::scalar_from;
using imcf::test::shift_one;
using imcf::test::sym_from;
using imcf::test::torus;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("metric_inverse on the identity and a diagonal metric") {
  const GridChart grid = torus(8);
  const SymTensorField id = constant_sym(grid, 1.0, 0.0, 1.0);
  const SymTensorField idi = metric_inverse(id);
  for (long n = 0; n < grid.node_count(); ++n) {
    REQUIRE(idi.at(n, 0, 0) == 1.0);
    REQUIRE(idi.at(n, 0, 1) == 0.0);
    REQUIRE(idi.at(n, 1, 1) == 1.0);
  }
  const SymTensorField d = constant_sym(grid, 4.0, 0.0, 1.0);
  const SymTensorField di = metric_inverse(d);
  REQUIRE(di.at(0, 0, 0) == Catch::Approx(0.25).margin(1e-15));
  REQUIRE(di.at(0, 1, 1) == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(di.variance == Variance::contravariant);
}

TEST_CASE("metric_inverse multiplies back to the identity on random SPD data") {
  const GridChart grid = torus(16);
  const SymTensorField g = random_spd_field(grid, 42);
  const SymTensorField gi = metric_inverse(g);
  double worst = 0.0;
  for (long n = 0; n < grid.node_count(); ++n) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double prod = 0.0;
        for (int k = 0; k < 2; ++k) prod += g.at(n, i, k) * gi.at(n, k, j);
        worst = std::max(worst, std::abs(prod - (i == j ? 1.0 : 0.0)));
      }
  }
  REQUIRE(worst < 1e-12);
}

TEST_CASE("metric_inverse rejects indefinite input with the node index") {
  const GridChart grid = torus(8);
  SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
  g.at(5, 1, 1) = -1.0;
  REQUIRE_THROWS_AS(metric_inverse(g), NotPositiveDefinite);
  try {
    metric_inverse(g);
  } catch (const NotPositiveDefinite& e) {
    REQUIRE(e.node == 5);
  }
}

TEST_CASE("metric_determinant on simple matrices") {
  const GridChart grid = torus(8);
  REQUIRE(metric_determinant(constant_sym(grid, 1.0, 0.0, 1.0)).v[0] == 1.0);
  REQUIRE(metric_determinant(constant_sym(grid, 4.0, 0.0, 1.0)).v[0] == 4.0);
  REQUIRE(metric_determinant(constant_sym(grid, 2.0, 1.0, 2.0)).v[0] == 3.0);
}

TEST_CASE("christoffel vanishes exactly for a constant metric") {
  const GridChart grid = torus(16);
  const ThirdOrderField gamma = christoffel(grid, constant_sym(grid, 1.3, 0.2, 0.9));
  for (double v : gamma.v) REQUIRE(v == 0.0);
}

TEST_CASE("christoffel matches the conformal closed form at second order") {
  // For g = exp(2 phi) delta: Gamma^k_ij = d_j phi delta_ki + d_i phi delta_kj
  //                                        - d_k phi delta_ij.
  auto phi = [](double x, double) { return 0.1 * std::sin(x); };
  auto dphi = [](double x, double, int axis) {
    return axis == 0 ? 0.1 * std::cos(x) : 0.0;
  };
  auto worst_error = [&](int nodes) {
    const GridChart grid = torus(nodes);
    const ThirdOrderField gamma = christoffel(grid, conformal_metric(grid, phi));
    double worst = 0.0;
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j) {
        const double x = grid.coordinate(i), y = grid.coordinate(j);
        const long n = grid.node(i, j);
        for (int k = 0; k < 2; ++k)
          for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) {
              const double exact = dphi(x, y, b) * (k == a) + dphi(x, y, a) * (k == b) -
                                   dphi(x, y, k) * (a == b);
              worst = std::max(worst, std::abs(gamma.at(n, k, a, b) - exact));
            }
      }
    return worst;
  };
  const double e32 = worst_error(32);
  const double e64 = worst_error(64);
  REQUIRE(e32 < 1e-3);
  const double ratio = e32 / e64;
  REQUIRE(ratio > 3.2);
  REQUIRE(ratio < 4.8);
}

TEST_CASE("riemann_curvature is exactly zero on a flat chart") {
  const GridChart grid = torus(16);
  const CurvatureField r = riemann_curvature(grid, constant_sym(grid, 1.0, 0.0, 1.0));
  for (double v : r.v) REQUIRE(v == 0.0);
}

TEST_CASE("riemann_curvature reproduces the conformal Gauss curvature") {
  // K = -exp(-2 phi) (flat Laplacian of phi), recovered as R_1212 / det g.
  auto phi = [](double x, double y) { return 0.1 * std::sin(x) * std::sin(y); };
  auto worst_error = [&](int nodes) {
    const GridChart grid = torus(nodes);
    const SymTensorField g = conformal_metric(grid, phi);
    const CurvatureField r = riemann_curvature(grid, g);
    const ScalarField det = metric_determinant(g);
    double worst = 0.0;
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j) {
        const double x = grid.coordinate(i), y = grid.coordinate(j);
        const long n = grid.node(i, j);
        const double k_exact = -std::exp(-2.0 * phi(x, y)) * (-2.0 * phi(x, y));
        worst = std::max(worst, std::abs(r.at(n, 0, 1, 0, 1) / det.v[n] - k_exact));
      }
    return worst;
  };
  const double e32 = worst_error(32);
  const double e64 = worst_error(64);
  REQUIRE(e32 < 5e-3);
  const double ratio = e32 / e64;
  REQUIRE(ratio > 3.2);
  REQUIRE(ratio < 4.8);
}

TEST_CASE("riemann_curvature output satisfies the algebraic symmetries exactly") {
  auto raw_defect = [](int nodes) {
    const GridChart grid = torus(nodes);
    const SymTensorField g =
        conformal_metric(grid, [](double x, double y) { return 0.15 * std::sin(x + 2 * y); });
    double raw_asym = -1.0;
    const CurvatureField r = riemann_curvature(grid, g, &raw_asym);
    for (long n = 0; n < grid.node_count(); ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
              REQUIRE(r.at(n, i, j, k, l) == -r.at(n, j, i, k, l));
              REQUIRE(r.at(n, i, j, k, l) == -r.at(n, i, j, l, k));
              REQUIRE(r.at(n, i, j, k, l) == r.at(n, k, l, i, j));
            }
    return raw_asym;
  };
  // The defect removed by symmetrization is a discretization artifact:
  // nonzero, shrinking at second order.
  const double a24 = raw_defect(24);
  const double a48 = raw_defect(48);
  REQUIRE(a24 > 0.0);
  REQUIRE(a24 / a48 > 3.0);
  REQUIRE(a24 / a48 < 5.5);
}

TEST_CASE("covariant_gradient_sym2 of a constant tensor on a flat chart is zero") {
  const GridChart grid = torus(16);
  const SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
  const ThirdOrderField t = covariant_gradient_sym2(grid, g, constant_sym(grid, 0.7, -0.3, 1.1));
  for (double v : t.v) REQUIRE(v == 0.0);
}

TEST_CASE("covariant gradient of a Hessian field is i<->j symmetric at second order") {
  // h = Hessian of w: third partials commute, so nabla_i h_jk = nabla_j h_ik
  // up to the stencil error. A single trigonometric mode would cancel the
  // stencil error identically; two modes expose the genuine O(dx^2) defect.
  auto hessian = [](double x, double y) {
    SymMat<2> m;
    m(0, 0) = -0.1 * std::sin(x) * std::sin(y) - 4.0 * 0.07 * std::sin(2 * x + y);
    m(0, 1) = 0.1 * std::cos(x) * std::cos(y) - 2.0 * 0.07 * std::sin(2 * x + y);
    m(1, 1) = -0.1 * std::sin(x) * std::sin(y) - 0.07 * std::sin(2 * x + y);
    return m;
  };
  auto residual = [&](int nodes) {
    const GridChart grid = torus(nodes);
    const SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
    const ThirdOrderField t = covariant_gradient_sym2(grid, g, sym_from(grid, hessian));
    double worst = 0.0;
    for (long n = 0; n < grid.node_count(); ++n)
      for (int k = 0; k < 2; ++k)
        worst = std::max(worst, std::abs(t.at(n, 0, 1, k) - t.at(n, 1, 0, k)));
    return worst;
  };
  const double e32 = residual(32);
  const double e64 = residual(64);
  REQUIRE(e32 < 1e-2);
  REQUIRE(e32 / e64 > 3.2);
  REQUIRE(e32 / e64 < 4.8);
}

TEST_CASE("rough_laplacian_sym2 reproduces the Fourier eigenvalue") {
  auto worst_error = [&](int nodes) {
    const GridChart grid = torus(nodes);
    const SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
    const SymTensorField h = sym_from(grid, [](double x, double) {
      SymMat<2> m;
      m(0, 0) = std::sin(x);
      return m;
    });
    const SymTensorField lap = rough_laplacian_sym2(grid, g, h);
    double worst = 0.0;
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j) {
        const long n = grid.node(i, j);
        worst = std::max(worst, std::abs(lap.at(n, 0, 0) + std::sin(grid.coordinate(i))));
        worst = std::max(worst, std::abs(lap.at(n, 0, 1)));
        worst = std::max(worst, std::abs(lap.at(n, 1, 1)));
      }
    return worst;
  };
  // Two composed first-derivative stencils leave a wide-stencil error
  // sin(dx)^2/dx^2 - 1 ~ dx^2/3.
  const double e32 = worst_error(32);
  const double e64 = worst_error(64);
  REQUIRE(e32 < 2e-2);
  REQUIRE(e32 / e64 > 3.2);
  REQUIRE(e32 / e64 < 4.8);

  const GridChart grid = torus(16);
  const SymTensorField zero_lap = rough_laplacian_sym2(
      grid, constant_sym(grid, 1.0, 0.0, 1.0), constant_sym(grid, 0.4, 0.1, -0.2));
  for (double v : zero_lap.v) REQUIRE(v == 0.0);
}

TEST_CASE("laplace_beltrami with a flat metric is the flat Laplacian") {
  const GridChart grid = torus(64);
  const SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
  const ScalarField f = scalar_from(grid, [](double x, double) { return std::sin(x); });
  const ScalarField lap = laplace_beltrami(grid, g, f);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      worst = std::max(worst,
                       std::abs(lap.v[grid.node(i, j)] + std::sin(grid.coordinate(i))));
  REQUIRE(worst < 1e-3);
}

TEST_CASE("integrate_density trivial and trigonometric cases") {
  {
    const GridChart grid(2, 16, 1.0);
    const SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
    REQUIRE(integrate_density(grid, g, ScalarField(grid.node_count(), 1.0)) ==
            Catch::Approx(1.0).margin(1e-14));
  }
  {
    // g = 4 delta doubles every length, so the area scales by
    // sqrt(det) = sqrt(16) = 4.
    const GridChart grid = torus(16);
    const SymTensorField g = constant_sym(grid, 4.0, 0.0, 4.0);
    const double period2 = std::pow(2.0 * M_PI, 2);
    REQUIRE(integrate_density(grid, g, ScalarField(grid.node_count(), 1.0)) ==
            Catch::Approx(4.0 * period2).epsilon(1e-13));
  }
  {
    // Node-sum quadrature is spectrally exact for trigonometric integrands.
    const GridChart grid = torus(32);
    const SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
    const ScalarField f = scalar_from(grid, [](double x, double) {
      const double s = std::sin(x);
      return s * s;
    });
    REQUIRE(integrate_density(grid, g, f) ==
            Catch::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
  }
}

TEST_CASE("integrate_density rejects a broken metric") {
  const GridChart grid = torus(8);
  SymTensorField g = constant_sym(grid, 1.0, 0.0, 1.0);
  g.at(3, 0, 0) = -2.0;
  REQUIRE_THROWS_AS(integrate_density(grid, g, ScalarField(grid.node_count(), 1.0)),
                    NegativeDeterminant);
}

TEST_CASE("volume scales as lambda^{n/2} under metric scaling") {
  const GridChart grid = torus(24);
  const SymTensorField g = random_spd_field(grid, 3);
  SymTensorField scaled = g;
  const double lambda = 2.37;
  for (double& v : scaled.v) v *= lambda;
  const ScalarField one(grid.node_count(), 1.0);
  const double base = integrate_density(grid, g, one);
  const double big = integrate_density(grid, scaled, one);
  REQUIRE(std::abs(big - lambda * base) <= 1e-12 * std::abs(big));
}

TEST_CASE("stencil operators are translation equivariant, bitwise") {
  const GridChart grid = torus(24);
  const SymTensorField g =
      conformal_metric(grid, [](double x, double y) { return 0.1 * std::sin(x) * std::cos(y); });
  const SymTensorField h = sym_from(grid, [](double x, double y) {
    SymMat<2> m;
    m(0, 0) = 0.2 * std::cos(x);
    m(0, 1) = 0.1 * std::sin(y);
    m(1, 1) = 0.3 * std::cos(x + y);
    return m;
  });
  for (int axis = 0; axis < 2; ++axis) {
    SymTensorField gs = g;
    gs.v = shift_one(grid, g.v, SymTensorField::ncomp, axis);
    SymTensorField hs = h;
    hs.v = shift_one(grid, h.v, SymTensorField::ncomp, axis);

    const ThirdOrderField gamma = christoffel(grid, g);
    const ThirdOrderField gamma_s = christoffel(grid, gs);
    REQUIRE(max_abs_diff(shift_one(grid, gamma.v, ThirdOrderField::ncomp, axis), gamma_s.v) ==
            0.0);

    const CurvatureField r = riemann_curvature(grid, g);
    const CurvatureField rs = riemann_curvature(grid, gs);
    REQUIRE(max_abs_diff(shift_one(grid, r.v, CurvatureField::ncomp, axis), rs.v) == 0.0);

    const SymTensorField lap = rough_laplacian_sym2(grid, g, h);
    const SymTensorField lap_s = rough_laplacian_sym2(grid, gs, hs);
    REQUIRE(max_abs_diff(shift_one(grid, lap.v, SymTensorField::ncomp, axis), lap_s.v) == 0.0);
  }
}

TEST_CASE("grid chart validation") {
  REQUIRE_THROWS_AS(GridChart(3, 16, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(GridChart(2, 4, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(GridChart(2, 16, 0.0), std::invalid_argument);
  const GridChart g(2, 10, 5.0);
  REQUIRE(g.spacing() == 0.5);
  REQUIRE(g.node_count() == 100);
}
