#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "imcf/linalg.hpp"
#include "imcf/spacelike.hpp"

namespace imcf {

/// Volume of the unit n-sphere, 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double sphere_volume(int n) {
  if (n < 1) throw std::invalid_argument("sphere_volume needs n >= 1");
  const double half = (n + 1) / 2.0;
  return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

/// Gauss-Bonnet-Chern density per unit volume element for a space-like pair
/// (g, h): (-1)^{n/2} (2 / vol S^n) det(h) / det(g).
inline double chern_density_closed_form(const SmallSym& g, const SmallSym& h, int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("even dimension required");
  if (g.n != n || h.n != n) throw std::invalid_argument("matrix dimension mismatch");
  const double detg = determinant(g);
  if (detg == 0.0) throw std::invalid_argument("singular metric");
  const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * 2.0 / sphere_volume(n) * determinant(h) / detg;
}

namespace detail {

inline void permutations_with_signs(int n, std::vector<std::array<int, 6>>& perms,
                                    std::vector<double>& signs) {
  perms.clear();
  signs.clear();
  std::array<int, 6> p{};
  for (int i = 0; i < n; ++i) p[i] = i;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    perms.push_back(p);
    signs.push_back(inv % 2 == 0 ? 1.0 : -1.0);
  } while (std::next_permutation(p.begin(), p.begin() + n));
}

}  // namespace detail

/// Brute-force Pfaffian route to the same density: orthonormalize the frame
/// with the Cholesky factor of g, build the curvature from the Gauss
/// equation, and evaluate the double epsilon contraction
///   sum_{s,t} sgn(s) sgn(t) prod_m R_{s(2m-1) s(2m) t(2m-1) t(2m)}
/// normalized by (8 pi)^{n/2} (n/2)!. The frame transform divides out
/// sqrt(det g), so the value is again per unit dv. Serves as the oracle for
/// chern_density_closed_form; n in {2, 4, 6}.
inline double chern_density_pfaffian(const SmallSym& g, const SmallSym& h, int n) {
  if (n != 2 && n != 4 && n != 6) throw std::invalid_argument("chern_density_pfaffian: n must be 2, 4 or 6");
  if (g.n != n || h.n != n) throw std::invalid_argument("matrix dimension mismatch");

  SmallSym lower;
  if (!cholesky(g, lower)) throw std::invalid_argument("metric not positive definite");
  // columns of L^{-T} form an orthonormal frame; h in that frame is
  // hhat = L^{-1} h L^{-T}, computed by two triangular solves.
  SmallSym x(n);  // L^{-1} h
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i) {
      double v = h(i, c);
      for (int k = 0; k < i; ++k) v -= lower(i, k) * x(k, c);
      x(i, c) = v / lower(i, i);
    }
  SmallSym hhat(n);  // x L^{-T}: solve row-wise against L^T
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      double v = x(r, j);
      for (int k = 0; k < j; ++k) v -= lower(j, k) * hhat(r, k);
      hhat(r, j) = v / lower(j, j);
    }

  auto rhat = [&](int a, int b, int c, int d) {
    return -(hhat(a, c) * hhat(b, d) - hhat(a, d) * hhat(b, c));
  };

  std::vector<std::array<int, 6>> perms;
  std::vector<double> signs;
  detail::permutations_with_signs(n, perms, signs);

  double sum = 0.0;
  for (size_t a = 0; a < perms.size(); ++a)
    for (size_t b = 0; b < perms.size(); ++b) {
      double prod = signs[a] * signs[b];
      for (int m = 0; m < n / 2 && prod != 0.0; ++m)
        prod *= rhat(perms[a][2 * m], perms[a][2 * m + 1], perms[b][2 * m], perms[b][2 * m + 1]);
      sum += prod;
    }

  double norm = 1.0;
  for (int m = 1; m <= n / 2; ++m) norm *= 8.0 * M_PI * m;
  return sum / norm;
}

/// Euler characteristic of a grid state through the curvature integral,
/// (-1)^{n/2} (2 / vol S^n) integral of det(h)/det(g) dv.
inline double euler_characteristic(const SpacelikeState& state) {
  state.grid.require_2d("euler_characteristic");
  const long nodes = state.g.nodes();
  ScalarField density(nodes);
  for (long n = 0; n < nodes; ++n) {
    const double detg = sym_determinant<2>(state.g.matrix(n));
    if (!(detg > 0.0)) throw NegativeDeterminant(n);
    density.v[n] = sym_determinant<2>(state.h.matrix(n)) / detg;
  }
  return -2.0 / sphere_volume(2) * integrate_density(state.grid, state.g, density);
}

}  // namespace imcf
