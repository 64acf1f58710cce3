#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "imcf/homogeneous.hpp"
#include "imcf/spacelike.hpp"

using namespace imcf;
using imcf::test::constant_sym;
using imcf::test::random_spd_field;
using imcf::test::scalar_from;
using imcf::test::sym_from;
using imcf::test::torus;

namespace {

SpacelikeState graph_state(int nodes, double amplitude = 0.2, double frequency = 1.0) {
  const GridChart grid = torus(nodes);
  return from_graph(grid, scalar_from(grid, [=](double x, double y) {
                      return amplitude * std::sin(frequency * x) * std::sin(frequency * y);
                    }));
}

}  // namespace

TEST_CASE("derived_scalars on the flat torus vanish") {
  const GridChart grid = torus(16);
  const SpacelikeState state(grid, constant_sym(grid, 1.0, 0.0, 1.0),
                             SymTensorField(grid.node_count()));
  const DerivedScalars d = derived_scalars(state);
  for (long n = 0; n < grid.node_count(); ++n) {
    REQUIRE(d.H.v[n] == 0.0);
    REQUIRE(d.A2.v[n] == 0.0);
    REQUIRE(d.gradA2.v[n] == 0.0);
    REQUIRE(d.traceless2.v[n] == 0.0);
  }
}

TEST_CASE("derived_scalars on constant umbilic data reproduce the space-form values") {
  // g = phi delta, h = psi delta with phi = psi = 1: H = 2, |A|^2 = 2,
  // parallel h, umbilic.
  const GridChart grid = torus(16);
  const SpacelikeState state(grid, constant_sym(grid, 1.0, 0.0, 1.0),
                             constant_sym(grid, 1.0, 0.0, 1.0));
  const DerivedScalars d = derived_scalars(state);
  for (long n = 0; n < grid.node_count(); ++n) {
    REQUIRE(d.H.v[n] == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(d.A2.v[n] == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(d.gradA2.v[n] == 0.0);
    REQUIRE(d.traceless2.v[n] == Catch::Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("traceless2 assembly identity matches the direct contraction") {
  const GridChart grid = torus(16);
  const SymTensorField g = random_spd_field(grid, 11);
  SymTensorField h = random_spd_field(grid, 12);
  for (double& x : h.v) x -= 0.6;  // make it indefinite
  const SpacelikeState state(grid, g, h);
  const DerivedScalars d = derived_scalars(state);
  const SymTensorField gi = metric_inverse(g);
  for (long n = 0; n < grid.node_count(); ++n) {
    // |h - (H/2) g|^2 by direct contraction with both indices raised.
    double direct = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const double tij = h.at(n, i, j) - 0.5 * d.H.v[n] * g.at(n, i, j);
            const double tkl = h.at(n, k, l) - 0.5 * d.H.v[n] * g.at(n, k, l);
            direct += gi.at(n, i, k) * gi.at(n, j, l) * tij * tkl;
          }
    REQUIRE(d.traceless2.v[n] ==
            Catch::Approx(direct).margin(1e-12 * (1.0 + std::abs(direct))));
    // Cauchy-Schwarz: n |A|^2 >= H^2, equality exactly where traceless2 = 0.
    REQUIRE(2.0 * d.A2.v[n] + 1e-13 >= d.H.v[n] * d.H.v[n]);
  }
}

TEST_CASE("gauss_residual is zero on the flat torus and 1 for forced algebra") {
  const GridChart grid = torus(16);
  const SymTensorField flat = constant_sym(grid, 1.0, 0.0, 1.0);
  {
    const SpacelikeState state(grid, flat, SymTensorField(grid.node_count()));
    const GaussResidual r = gauss_residual(state);
    REQUIRE(r.sup == 0.0);
  }
  {
    // h = identity on a flat chart violates the Gauss equation by exactly
    // the quadratic term: sup residual = 1.
    const SpacelikeState state(grid, flat, constant_sym(grid, 1.0, 0.0, 1.0));
    const GaussResidual r = gauss_residual(state);
    REQUIRE(r.sup == 1.0);
    REQUIRE(r.node_norm.v[0] == 1.0);
  }
}

TEST_CASE("graph states satisfy Gauss and Codazzi at second order") {
  const SpacelikeState s32 = graph_state(32);
  const SpacelikeState s64 = graph_state(64);
  const double g32 = gauss_residual(s32).sup;
  const double g64 = gauss_residual(s64).sup;
  REQUIRE(g32 < 5e-3);
  REQUIRE(g32 / g64 > 3.2);
  REQUIRE(g32 / g64 < 4.8);
  const double c32 = codazzi_residual(s32);
  const double c64 = codazzi_residual(s64);
  REQUIRE(c32 < 5e-3);
  REQUIRE(c32 / c64 > 3.2);
  REQUIRE(c32 / c64 < 4.8);
}

TEST_CASE("codazzi_residual vanishes for h = 0 and detects a constructed violation") {
  const GridChart grid = torus(64);
  {
    const SpacelikeState state(grid, random_spd_field(grid, 5), SymTensorField(grid.node_count()));
    REQUIRE(codazzi_residual(state) == 0.0);
  }
  {
    // g = diag(1 + 0.5 sin x, 1) with constant off-diagonal h: the only
    // nonzero symbol is Gamma^1_11 = a'/(2a), and the residual reduces to
    // |a'|/(2a) with maximum (0.5 sqrt(3)/2) / 1.5 = 0.28867...
    const SymTensorField g = sym_from(grid, [](double x, double) {
      SymMat<2> m;
      m(0, 0) = 1.0 + 0.5 * std::sin(x);
      m(1, 1) = 1.0;
      return m;
    });
    const SpacelikeState state(grid, g, constant_sym(grid, 0.0, 1.0, 0.0));
    const double res = codazzi_residual(state);
    REQUIRE(res > 0.28);
    REQUIRE(res < 0.295);
  }
}

TEST_CASE("from_graph of u = 0 is the flat torus") {
  const GridChart grid = torus(16);
  const SpacelikeState state = from_graph(grid, ScalarField(grid.node_count(), 0.0));
  REQUIRE(state.t == 0.0);
  for (long n = 0; n < grid.node_count(); ++n) {
    REQUIRE(state.g.at(n, 0, 0) == 1.0);
    REQUIRE(state.g.at(n, 0, 1) == 0.0);
    REQUIRE(state.g.at(n, 1, 1) == 1.0);
    REQUIRE(state.h.at(n, 0, 0) == 0.0);
    REQUIRE(state.h.at(n, 0, 1) == 0.0);
    REQUIRE(state.h.at(n, 1, 1) == 0.0);
  }
}

TEST_CASE("from_graph rejects steep graphs") {
  const GridChart grid = torus(64);
  const ScalarField u = scalar_from(grid, [](double x, double) { return 1.1 * std::sin(x); });
  REQUIRE_THROWS_AS(from_graph(grid, u), NotSpacelike);
  try {
    from_graph(grid, u);
  } catch (const NotSpacelike& e) {
    REQUIRE(e.max_gradient > 1.0);
    REQUIRE(e.max_gradient < 1.1);
  }
}

TEST_CASE("sectional_bound: flat chart, graph state and curvature cross-check") {
  {
    const GridChart grid = torus(16);
    const SpacelikeState state(grid, constant_sym(grid, 1.0, 0.0, 1.0),
                               SymTensorField(grid.node_count()));
    REQUIRE(sectional_bound(state) == 0.0);
  }
  {
    const SpacelikeState s = graph_state(48);
    const double from_h = sectional_bound(s);
    const double from_r = sectional_bound_from_curvature(s);
    REQUIRE(from_h > 0.0);
    REQUIRE(std::abs(from_h - from_r) < 5e-3);
    // and the h route is exactly max |det h| / det g
    double expect = 0.0;
    for (long n = 0; n < s.grid.node_count(); ++n) {
      const double detg = sym_determinant<2>(s.g.matrix(n));
      expect = std::max(expect, std::abs(sym_determinant<2>(s.h.matrix(n))) / detg);
    }
    REQUIRE(from_h == expect);
  }
}

TEST_CASE("homogeneous hyperbolic construction and closed forms") {
  const HomogeneousState s = homogeneous_hyperbolic(2, 1.0, 4.0 * M_PI, -2);
  REQUIRE(s.phi == 1.0);
  REQUIRE(s.psi == 1.0);
  REQUIRE(s.mean_curvature() == Catch::Approx(2.0).margin(1e-14));
  REQUIRE(s.a2() == Catch::Approx(2.0).margin(1e-14));
  REQUIRE(s.sectional_bound() == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(euler_characteristic(s) == Catch::Approx(-2.0).margin(1e-12));

  const HomogeneousState s4 = homogeneous_hyperbolic(4, 1.0, sphere_volume(4), 2);
  REQUIRE(s4.mean_curvature() == Catch::Approx(4.0).margin(1e-14));
  REQUIRE(s4.a2() == Catch::Approx(4.0).margin(1e-14));
  REQUIRE(euler_characteristic(s4) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("homogeneous constructors validate their input") {
  REQUIRE_THROWS_AS(homogeneous_hyperbolic(3, 1.0, 4.0 * M_PI, -2), std::invalid_argument);
  REQUIRE_THROWS_AS(homogeneous_hyperbolic(2, -1.0, 4.0 * M_PI, -2), std::invalid_argument);
  // base volume inconsistent with the Euler characteristic
  REQUIRE_THROWS_AS(homogeneous_hyperbolic(2, 1.0, 5.0, -2), std::invalid_argument);
  const HomogeneousState flat = homogeneous_flat(2, 1.0, 1.0);
  REQUIRE(flat.psi == 0.0);
  REQUIRE(euler_characteristic(flat) == 0.0);
  REQUIRE(flat.sectional_bound() == 0.0);
}

TEST_CASE("graph torus Euler characteristic vanishes within discretization error") {
  const SpacelikeState s = graph_state(64);
  REQUIRE(std::abs(euler_characteristic(s)) < 1e-3);
}

TEST_CASE("the global sign of h is unobservable in even dimension") {
  // Both the Gauss quadratic and det h are even in h, so flipping the sign
  // from_graph picks changes nothing measurable.
  const SpacelikeState s = graph_state(32);
  SpacelikeState flipped = s;
  for (double& x : flipped.h.v) x = -x;
  REQUIRE(gauss_residual(flipped).sup == gauss_residual(s).sup);
  REQUIRE(codazzi_residual(flipped) == codazzi_residual(s));
  REQUIRE(euler_characteristic(flipped) == euler_characteristic(s));
  REQUIRE(sectional_bound(flipped) == sectional_bound(s));
}
