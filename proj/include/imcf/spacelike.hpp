#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "imcf/geometry.hpp"

namespace imcf {

/// A discretized space-like manifold: periodic chart, metric, second
/// fundamental form and flow time. The Gauss/Codazzi equations are monitored
/// on states, never enforced.
struct SpacelikeState {
  GridChart grid;
  SymTensorField g;
  SymTensorField h;
  double t = 0.0;

  SpacelikeState(GridChart grid_, SymTensorField g_, SymTensorField h_, double t_ = 0.0)
      : grid(std::move(grid_)), g(std::move(g_)), h(std::move(h_)), t(t_) {}

  static constexpr int dim = 2;
};

struct DerivedScalars {
  ScalarField H;          // g^{ij} h_ij
  ScalarField A2;         // |A|^2 = g^{ij} g^{kl} h_ik h_jl
  ScalarField gradA2;     // |nabla A|^2
  ScalarField traceless2; // |h - (H/n) g|^2, assembled as A2 - H^2/n
};

/// All four scalar invariants of a state in one sweep. traceless2 uses the
/// contraction identity A2 - H^2/n, clamped at zero against round-off.
inline DerivedScalars derived_scalars(const SpacelikeState& state) {
  const long nodes = state.g.nodes();
  const SymTensorField gi = metric_inverse(state.g);
  const ThirdOrderField gamma = detail::christoffel_from_inverse(state.grid, state.g, gi);
  const ThirdOrderField t = detail::covariant_gradient_sym2_from(state.grid, gamma, state.h);

  DerivedScalars out{ScalarField(nodes), ScalarField(nodes), ScalarField(nodes),
                     ScalarField(nodes)};
  for (long n = 0; n < nodes; ++n) {
    double trace = 0.0, a2 = 0.0;
    double hup[2][2];  // h with both indices raised
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) s += gi.at(n, i, k) * gi.at(n, j, l) * state.h.at(n, k, l);
        hup[i][j] = s;
      }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        trace += gi.at(n, i, j) * state.h.at(n, i, j);
        a2 += hup[i][j] * state.h.at(n, i, j);
      }
    double grad = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            for (int p = 0; p < 2; ++p)
              for (int q = 0; q < 2; ++q)
                grad += gi.at(n, i, j) * gi.at(n, k, l) * gi.at(n, p, q) * t.at(n, i, k, p) *
                        t.at(n, j, l, q);
    out.H.v[n] = trace;
    out.A2.v[n] = a2;
    out.gradA2.v[n] = std::max(grad, 0.0);
    out.traceless2.v[n] = std::max(a2 - trace * trace / 2.0, 0.0);
  }
  return out;
}

struct GaussResidual {
  double sup = 0.0;
  ScalarField node_norm;
};

/// Max-component residual of R_ijkl + (h_ik h_jl - h_il h_jk), node-wise and
/// as a sup over the chart.
inline GaussResidual gauss_residual(const SpacelikeState& state) {
  const long nodes = state.g.nodes();
  const CurvatureField r = riemann_curvature(state.grid, state.g);
  GaussResidual out{0.0, ScalarField(nodes)};
  for (long n = 0; n < nodes; ++n) {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const double quad =
                state.h.at(n, i, k) * state.h.at(n, j, l) - state.h.at(n, i, l) * state.h.at(n, j, k);
            worst = std::max(worst, std::abs(r.at(n, i, j, k, l) + quad));
          }
    out.node_norm.v[n] = worst;
    out.sup = std::max(out.sup, worst);
  }
  return out;
}

/// Sup over nodes and index triples of |nabla_i h_jk - nabla_j h_ik|.
inline double codazzi_residual(const SpacelikeState& state) {
  const ThirdOrderField t = covariant_gradient_sym2(state.grid, state.g, state.h);
  const long nodes = t.nodes();
  double sup = 0.0;
  for (long n = 0; n < nodes; ++n)
    for (int k = 0; k < 2; ++k) sup = std::max(sup, std::abs(t.at(n, 0, 1, k) - t.at(n, 1, 0, k)));
  return sup;
}

/// Induced geometry of the space-like graph x -> (x, u(x)) over the periodic
/// chart: g_ij = delta_ij - u_i u_j, h_ij = u_ij / sqrt(1 - |grad u|^2).
/// The Gauss equation fixes h only up to a global sign for even dimension
/// (both the flow and det h are invariant under h -> -h); the constructor
/// picks the + sign.
inline SpacelikeState from_graph(const GridChart& grid, const ScalarField& u) {
  grid.require_2d("from_graph");
  const long nodes = grid.node_count();
  std::vector<double> du[2], d2u[2], duxy;
  detail::central_difference(grid, u.v, 1, 0, du[0]);
  detail::central_difference(grid, u.v, 1, 1, du[1]);
  detail::central_second_difference(grid, u.v, 1, 0, d2u[0]);
  detail::central_second_difference(grid, u.v, 1, 1, d2u[1]);
  detail::central_difference(grid, du[0], 1, 1, duxy);

  double max_grad2 = 0.0;
  for (long n = 0; n < nodes; ++n)
    max_grad2 = std::max(max_grad2, du[0][n] * du[0][n] + du[1][n] * du[1][n]);
  if (!(max_grad2 < 1.0)) throw NotSpacelike(std::sqrt(max_grad2));

  SymTensorField g(nodes, Variance::covariant);
  SymTensorField h(nodes, Variance::covariant);
  for (long n = 0; n < nodes; ++n) {
    const double grad2 = du[0][n] * du[0][n] + du[1][n] * du[1][n];
    const double w = 1.0 / std::sqrt(1.0 - grad2);
    g.at(n, 0, 0) = 1.0 - du[0][n] * du[0][n];
    g.at(n, 0, 1) = -du[0][n] * du[1][n];
    g.at(n, 1, 1) = 1.0 - du[1][n] * du[1][n];
    h.at(n, 0, 0) = d2u[0][n] * w;
    h.at(n, 0, 1) = duxy[n] * w;
    h.at(n, 1, 1) = d2u[1][n] * w;
  }
  return SpacelikeState(grid, std::move(g), std::move(h), 0.0);
}

/// Sup over nodes of |sectional curvature|, computed from h through the
/// space-like closed form |det h| / det g.
inline double sectional_bound(const SpacelikeState& state) {
  state.grid.require_2d("sectional_bound");
  const long nodes = state.g.nodes();
  double sup = 0.0;
  for (long n = 0; n < nodes; ++n) {
    const double detg = sym_determinant<2>(state.g.matrix(n));
    if (!(detg > 0.0)) throw NegativeDeterminant(n);
    const double deth = sym_determinant<2>(state.h.matrix(n));
    sup = std::max(sup, std::abs(deth) / detg);
  }
  return sup;
}

/// Cross-check value for sectional_bound from the assembled curvature
/// tensor, |R_1212| / det g. Agrees with the h route to O(spacing^2) on
/// constraint-satisfying states.
inline double sectional_bound_from_curvature(const SpacelikeState& state) {
  const CurvatureField r = riemann_curvature(state.grid, state.g);
  const long nodes = state.g.nodes();
  double sup = 0.0;
  for (long n = 0; n < nodes; ++n) {
    const double detg = sym_determinant<2>(state.g.matrix(n));
    if (!(detg > 0.0)) throw NegativeDeterminant(n);
    sup = std::max(sup, std::abs(r.at(n, 0, 1, 0, 1)) / detg);
  }
  return sup;
}

}  // namespace imcf
