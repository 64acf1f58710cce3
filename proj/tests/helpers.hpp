#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "imcf/fields.hpp"
#include "imcf/grid.hpp"

namespace imcf::test {

inline GridChart torus(int nodes, double period = 2.0 * M_PI) {
  return GridChart(2, nodes, period);
}

inline ScalarField scalar_from(const GridChart& grid,
                               const std::function<double(double, double)>& f) {
  const int m = grid.nodes_per_axis;
  ScalarField out(grid.node_count());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.v[grid.node(i, j)] = f(grid.coordinate(i), grid.coordinate(j));
  return out;
}

inline SymTensorField sym_from(const GridChart& grid,
                               const std::function<SymMat<2>(double, double)>& f,
                               Variance var = Variance::covariant) {
  const int m = grid.nodes_per_axis;
  SymTensorField out(grid.node_count(), var);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.set_matrix(grid.node(i, j), f(grid.coordinate(i), grid.coordinate(j)));
  return out;
}

/// Conformal metric exp(2 phi) * delta.
inline SymTensorField conformal_metric(const GridChart& grid,
                                       const std::function<double(double, double)>& phi) {
  return sym_from(grid, [&](double x, double y) {
    SymMat<2> g;
    const double e2 = std::exp(2.0 * phi(x, y));
    g(0, 0) = e2;
    g(1, 1) = e2;
    return g;
  });
}

inline SymTensorField constant_sym(const GridChart& grid, double xx, double xy, double yy,
                                   Variance var = Variance::covariant) {
  SymMat<2> m;
  m(0, 0) = xx;
  m(0, 1) = xy;
  m(1, 1) = yy;
  return SymTensorField::constant(grid.node_count(), m, var);
}

/// Node-wise random SPD metric, bounded away from singularity.
inline SymTensorField random_spd_field(const GridChart& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SymTensorField out(grid.node_count(), Variance::covariant);
  for (long n = 0; n < grid.node_count(); ++n) {
    double b[2][2];
    for (auto& row : b)
      for (double& x : row) x = uni(rng);
    SymMat<2> m;
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        m(i, j) = b[0][i] * b[0][j] + b[1][i] * b[1][j] + (i == j ? 0.3 : 0.0);
    out.set_matrix(n, m);
  }
  return out;
}

/// Cyclic shift of a multi-component field by one node along an axis.
inline std::vector<double> shift_one(const GridChart& grid, const std::vector<double>& src,
                                     int ncomp, int axis) {
  const int m = grid.nodes_per_axis;
  std::vector<double> dst(src.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int si = axis == 0 ? grid.wrap(i - 1) : i;
      const int sj = axis == 1 ? grid.wrap(j - 1) : j;
      for (int c = 0; c < ncomp; ++c)
        dst[(grid.node(i, j)) * ncomp + c] = src[grid.node(si, sj) * ncomp + c];
    }
  return dst;
}

}  // namespace imcf::test
