#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/fields.hpp"
#include "imcf/grid.hpp"
#include "imcf/linalg.hpp"

namespace imcf {
namespace detail {

/// Second-order central difference along one axis of a periodic 2-d grid.
/// src and dst hold ncomp doubles per node; every component is differenced.
inline void central_difference(const GridChart& grid, const std::vector<double>& src, int ncomp,
                               int axis, std::vector<double>& dst) {
  const int m = grid.nodes_per_axis;
  const double inv2dx = 1.0 / (2.0 * grid.spacing());
  dst.resize(src.size());
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1 == m) ? 0 : i + 1;
    const int im = (i == 0) ? m - 1 : i - 1;
    for (int j = 0; j < m; ++j) {
      const int jp = (j + 1 == m) ? 0 : j + 1;
      const int jm = (j == 0) ? m - 1 : j - 1;
      const long n = static_cast<long>(i) * m + j;
      const long np = (axis == 0) ? static_cast<long>(ip) * m + j : static_cast<long>(i) * m + jp;
      const long nm = (axis == 0) ? static_cast<long>(im) * m + j : static_cast<long>(i) * m + jm;
      for (int c = 0; c < ncomp; ++c)
        dst[n * ncomp + c] = (src[np * ncomp + c] - src[nm * ncomp + c]) * inv2dx;
    }
  }
}

/// Compact three-point second difference along one axis.
inline void central_second_difference(const GridChart& grid, const std::vector<double>& src,
                                      int ncomp, int axis, std::vector<double>& dst) {
  const int m = grid.nodes_per_axis;
  const double invdx2 = 1.0 / (grid.spacing() * grid.spacing());
  dst.resize(src.size());
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1 == m) ? 0 : i + 1;
    const int im = (i == 0) ? m - 1 : i - 1;
    for (int j = 0; j < m; ++j) {
      const int jp = (j + 1 == m) ? 0 : j + 1;
      const int jm = (j == 0) ? m - 1 : j - 1;
      const long n = static_cast<long>(i) * m + j;
      const long np = (axis == 0) ? static_cast<long>(ip) * m + j : static_cast<long>(i) * m + jp;
      const long nm = (axis == 0) ? static_cast<long>(im) * m + j : static_cast<long>(i) * m + jm;
      for (int c = 0; c < ncomp; ++c)
        dst[n * ncomp + c] =
            (src[np * ncomp + c] - 2.0 * src[n * ncomp + c] + src[nm * ncomp + c]) * invdx2;
    }
  }
}

}  // namespace detail

/// Node-wise inverse of a positive definite metric. The product with the
/// input reproduces the identity to round-off (Cholesky route).
inline SymTensorField metric_inverse(const SymTensorField& g) {
  const long nodes = g.nodes();
  SymTensorField out(nodes, Variance::contravariant);
  Mat<2> lower;
  for (long n = 0; n < nodes; ++n) {
    if (!cholesky(g.matrix(n), lower)) throw NotPositiveDefinite(n);
    out.set_matrix(n, inverse_from_cholesky(lower));
  }
  return out;
}

inline ScalarField metric_determinant(const SymTensorField& g) {
  const long nodes = g.nodes();
  ScalarField out(nodes);
  for (long n = 0; n < nodes; ++n) out.v[n] = sym_determinant<2>(g.matrix(n));
  return out;
}

namespace detail {

/// christoffel with a precomputed metric inverse, for reuse inside flows.
inline ThirdOrderField christoffel_from_inverse(const GridChart& grid, const SymTensorField& g,
                                                const SymTensorField& gi) {
  grid.require_2d("christoffel");
  const long nodes = g.nodes();
  std::vector<double> dg[2];
  central_difference(grid, g.v, SymTensorField::ncomp, 0, dg[0]);
  central_difference(grid, g.v, SymTensorField::ncomp, 1, dg[1]);

  ThirdOrderField gamma(nodes);
  for (long n = 0; n < nodes; ++n) {
    const long base = n * SymTensorField::ncomp;
    auto dgat = [&](int d, int i, int j) { return dg[d][base + sym_index<2>(i, j)]; };
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
          double s = 0.0;
          for (int l = 0; l < 2; ++l)
            s += 0.5 * gi.at(n, k, l) * (dgat(i, j, l) + dgat(j, i, l) - dgat(l, i, j));
          gamma.at(n, k, i, j) = s;
        }
  }
  return gamma;
}

}  // namespace detail

/// Christoffel symbols of the second kind, Gamma^k_ij, i<->j symmetric.
inline ThirdOrderField christoffel(const GridChart& grid, const SymTensorField& g) {
  return detail::christoffel_from_inverse(grid, g, metric_inverse(g));
}

/// Fully covariant curvature tensor with the sign fixed so the sectional
/// value R_1212 / det(g) is positive on a round sphere. The output is
/// explicitly symmetrized (both antisymmetries and pair interchange hold
/// exactly); the maximum raw defect removed by symmetrization is reported
/// through raw_asymmetry when given.
inline CurvatureField riemann_curvature(const GridChart& grid, const SymTensorField& g,
                                        double* raw_asymmetry = nullptr) {
  grid.require_2d("riemann_curvature");
  const long nodes = g.nodes();
  const SymTensorField gi = metric_inverse(g);
  const ThirdOrderField gamma = detail::christoffel_from_inverse(grid, g, gi);
  std::vector<double> dgamma[2];
  detail::central_difference(grid, gamma.v, ThirdOrderField::ncomp, 0, dgamma[0]);
  detail::central_difference(grid, gamma.v, ThirdOrderField::ncomp, 1, dgamma[1]);

  CurvatureField out(nodes);
  double worst = 0.0;
  for (long n = 0; n < nodes; ++n) {
    const long base = n * ThirdOrderField::ncomp;
    auto dgam = [&](int d, int up, int i, int j) {
      return dgamma[d][base + up * sym_count<2> + sym_index<2>(i, j)];
    };
    // R^m_{jkl} = d_k Gamma^m_{lj} - d_l Gamma^m_{kj}
    //           + Gamma^m_{kp} Gamma^p_{lj} - Gamma^m_{lp} Gamma^p_{kj}
    double rup[2][2][2][2];
    for (int mm = 0; mm < 2; ++mm)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            double s = dgam(k, mm, l, j) - dgam(l, mm, k, j);
            for (int p = 0; p < 2; ++p)
              s += gamma.at(n, mm, k, p) * gamma.at(n, p, l, j) -
                   gamma.at(n, mm, l, p) * gamma.at(n, p, k, j);
            rup[mm][j][k][l] = s;
          }
    double raw[2][2][2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            double s = 0.0;
            for (int mm = 0; mm < 2; ++mm) s += g.at(n, i, mm) * rup[mm][j][k][l];
            raw[i][j][k][l] = s;
          }
    // Canonical component (0,1,0,1); every slot follows by the algebraic
    // symmetries, which therefore hold exactly on the output.
    const double val =
        (raw[0][1][0][1] - raw[1][0][0][1] - raw[0][1][1][0] + raw[1][0][1][0]) / 4.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            double sym = 0.0;
            if (i != j && k != l) sym = ((i < j) == (k < l)) ? val : -val;
            out.at(n, i, j, k, l) = sym;
            worst = std::max(worst, std::abs(raw[i][j][k][l] - sym));
          }
  }
  if (raw_asymmetry) *raw_asymmetry = worst;
  return out;
}

namespace detail {

/// nabla_i h_jk with precomputed Christoffel symbols.
inline ThirdOrderField covariant_gradient_sym2_from(const GridChart& grid,
                                                    const ThirdOrderField& gamma,
                                                    const SymTensorField& h) {
  const long nodes = h.nodes();
  std::vector<double> dh[2];
  central_difference(grid, h.v, SymTensorField::ncomp, 0, dh[0]);
  central_difference(grid, h.v, SymTensorField::ncomp, 1, dh[1]);

  ThirdOrderField out(nodes);
  for (long n = 0; n < nodes; ++n) {
    const long base = n * SymTensorField::ncomp;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = j; k < 2; ++k) {
          double s = dh[i][base + sym_index<2>(j, k)];
          for (int mm = 0; mm < 2; ++mm)
            s -= gamma.at(n, mm, i, j) * h.at(n, mm, k) + gamma.at(n, mm, i, k) * h.at(n, j, mm);
          out.at(n, i, j, k) = s;
        }
  }
  return out;
}

/// Second covariant derivative contracted with the inverse metric,
/// g^{kl} nabla_k (nabla h)_{l i j}, where t = nabla h is a (0,3) tensor
/// symmetric in its last two slots. Result is symmetric in (i,j) because
/// every term is, so only packed components are formed.
inline SymTensorField traced_second_gradient(const GridChart& grid, const ThirdOrderField& gamma,
                                             const SymTensorField& gi, const ThirdOrderField& t) {
  const long nodes = t.nodes();
  std::vector<double> dt[2];
  central_difference(grid, t.v, ThirdOrderField::ncomp, 0, dt[0]);
  central_difference(grid, t.v, ThirdOrderField::ncomp, 1, dt[1]);

  SymTensorField out(nodes, Variance::covariant);
  for (long n = 0; n < nodes; ++n) {
    const long base = n * ThirdOrderField::ncomp;
    auto dtat = [&](int d, int l, int i, int j) {
      return dt[d][base + l * sym_count<2> + sym_index<2>(i, j)];
    };
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            // nabla_k t_{l i j}
            double s = dtat(k, l, i, j);
            for (int mm = 0; mm < 2; ++mm)
              s -= gamma.at(n, mm, k, l) * t.at(n, mm, i, j) +
                   gamma.at(n, mm, k, i) * t.at(n, l, mm, j) +
                   gamma.at(n, mm, k, j) * t.at(n, l, i, mm);
            acc += gi.at(n, k, l) * s;
          }
        out.at(n, i, j) = acc;
      }
  }
  return out;
}

}  // namespace detail

/// nabla_i h_jk = d_i h_jk - Gamma^m_ij h_mk - Gamma^m_ik h_jm.
inline ThirdOrderField covariant_gradient_sym2(const GridChart& grid, const SymTensorField& g,
                                               const SymTensorField& h) {
  grid.require_2d("covariant_gradient_sym2");
  return detail::covariant_gradient_sym2_from(grid, christoffel(grid, g), h);
}

/// Rough Laplacian of a symmetric 2-tensor, composed from two covariant
/// gradient applications and traced with g^{kl}.
inline SymTensorField rough_laplacian_sym2(const GridChart& grid, const SymTensorField& g,
                                           const SymTensorField& h) {
  grid.require_2d("rough_laplacian_sym2");
  const SymTensorField gi = metric_inverse(g);
  const ThirdOrderField gamma = detail::christoffel_from_inverse(grid, g, gi);
  const ThirdOrderField t = detail::covariant_gradient_sym2_from(grid, gamma, h);
  return detail::traced_second_gradient(grid, gamma, gi, t);
}

namespace detail {

/// Laplace-Beltrami operator on scalars with precomputed geometry,
/// g^{kl}(d_k d_l f - Gamma^m_kl d_m f), compact second-difference stencil.
inline ScalarField laplace_beltrami_from(const GridChart& grid, const ThirdOrderField& gamma,
                                         const SymTensorField& gi, const ScalarField& f) {
  const long nodes = f.nodes();
  std::vector<double> df[2], d2f[2], dxyv;
  central_difference(grid, f.v, 1, 0, df[0]);
  central_difference(grid, f.v, 1, 1, df[1]);
  central_second_difference(grid, f.v, 1, 0, d2f[0]);
  central_second_difference(grid, f.v, 1, 1, d2f[1]);
  central_difference(grid, df[0], 1, 1, dxyv);

  ScalarField out(nodes);
  for (long n = 0; n < nodes; ++n) {
    auto hess = [&](int k, int l) {
      if (k == l) return d2f[k][n];
      return dxyv[n];
    };
    double acc = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        double s = hess(k, l);
        for (int mm = 0; mm < 2; ++mm) s -= gamma.at(n, mm, k, l) * df[mm][n];
        acc += gi.at(n, k, l) * s;
      }
    out.v[n] = acc;
  }
  return out;
}

}  // namespace detail

inline ScalarField laplace_beltrami(const GridChart& grid, const SymTensorField& g,
                                    const ScalarField& f) {
  grid.require_2d("laplace_beltrami");
  const SymTensorField gi = metric_inverse(g);
  return detail::laplace_beltrami_from(grid, detail::christoffel_from_inverse(grid, g, gi), gi, f);
}

/// Node-sum quadrature of f dv = f sqrt(det g) * cell volume. With f = 1
/// this is the volume of the chart.
inline double integrate_density(const GridChart& grid, const SymTensorField& g,
                                const ScalarField& f) {
  const long nodes = g.nodes();
  const double cell = grid.cell_volume();
  double acc = 0.0;
  for (long n = 0; n < nodes; ++n) {
    const double det = sym_determinant<2>(g.matrix(n));
    if (!(det > 0.0)) throw NegativeDeterminant(n);
    acc += f.v[n] * std::sqrt(det);
  }
  return acc * cell;
}

}  // namespace imcf
