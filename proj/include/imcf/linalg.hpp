#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace imcf {

/// Packed index into the upper triangle of a symmetric N x N matrix,
/// row-major, (i,j) with i <= j. sym_index<2>: (0,0)->0, (0,1)->1, (1,1)->2.
template <int N>
constexpr int sym_index(int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * N - i * (i - 1) / 2 + (j - i);
}

template <int N>
inline constexpr int sym_count = N * (N + 1) / 2;

/// Symmetric N x N matrix in packed storage. A value type for per-node work.
template <int N>
struct SymMat {
  std::array<double, sym_count<N>> a{};

  double& operator()(int i, int j) { return a[sym_index<N>(i, j)]; }
  double operator()(int i, int j) const { return a[sym_index<N>(i, j)]; }

  static SymMat identity() {
    SymMat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
};

/// Dense N x N matrix, row-major.
template <int N>
struct Mat {
  std::array<double, N * N> a{};

  double& operator()(int i, int j) { return a[i * N + j]; }
  double operator()(int i, int j) const { return a[i * N + j]; }
};

/// Cholesky factorization s = L L^T, L lower triangular.
/// Returns false when s is not positive definite.
template <int N>
bool cholesky(const SymMat<N>& s, Mat<N>& lower) {
  lower = Mat<N>{};
  for (int j = 0; j < N; ++j) {
    double d = s(j, j);
    for (int k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > 0.0)) return false;
    lower(j, j) = std::sqrt(d);
    for (int i = j + 1; i < N; ++i) {
      double v = s(i, j);
      for (int k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / lower(j, j);
    }
  }
  return true;
}

template <int N>
double determinant_from_cholesky(const Mat<N>& lower) {
  double d = 1.0;
  for (int i = 0; i < N; ++i) d *= lower(i, i);
  return d * d;
}

/// Inverse of an SPD matrix from its Cholesky factor: s^-1 = L^-T L^-1.
template <int N>
SymMat<N> inverse_from_cholesky(const Mat<N>& lower) {
  // Forward-substitute columns of the identity to get L^-1.
  Mat<N> linv{};
  for (int c = 0; c < N; ++c) {
    for (int i = c; i < N; ++i) {
      double v = (i == c) ? 1.0 : 0.0;
      for (int k = c; k < i; ++k) v -= lower(i, k) * linv(k, c);
      linv(i, c) = v / lower(i, i);
    }
  }
  SymMat<N> out;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      double v = 0.0;
      for (int k = j; k < N; ++k) v += linv(k, i) * linv(k, j);
      out(i, j) = v;
    }
  return out;
}

template <int N>
double sym_determinant(const SymMat<N>& s) {
  if constexpr (N == 2) {
    return s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
  } else {
    // LU with partial pivoting on a dense copy; works for indefinite input.
    Mat<N> m;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m(i, j) = s(i, j);
    double det = 1.0;
    for (int c = 0; c < N; ++c) {
      int piv = c;
      for (int r = c + 1; r < N; ++r)
        if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
      if (piv != c) {
        for (int j = 0; j < N; ++j) std::swap(m.a[piv * N + j], m.a[c * N + j]);
        det = -det;
      }
      const double p = m(c, c);
      if (p == 0.0) return 0.0;
      det *= p;
      for (int r = c + 1; r < N; ++r) {
        const double f = m(r, c) / p;
        for (int j = c; j < N; ++j) m(r, j) -= f * m(c, j);
      }
    }
    return det;
  }
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym_eigenvalues_2x2(const SymMat<2>& s) {
  const double tr = s(0, 0) + s(1, 1);
  const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
  double disc = tr * tr - 4.0 * det;
  disc = disc > 0.0 ? std::sqrt(disc) : 0.0;
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

/// Symmetric matrix with runtime dimension, capped for pointwise curvature
/// algebra (n <= 6 in practice, storage allows 8).
struct SmallSym {
  static constexpr int max_dim = 8;
  int n = 0;
  std::array<double, max_dim * max_dim> a{};

  SmallSym() = default;
  explicit SmallSym(int n_) : n(n_) {
    if (n < 1 || n > max_dim) throw std::invalid_argument("SmallSym: bad dimension");
  }

  double& operator()(int i, int j) { return a[i * max_dim + j]; }
  double operator()(int i, int j) const { return a[i * max_dim + j]; }

  static SmallSym identity(int n_) {
    SmallSym m(n_);
    for (int i = 0; i < n_; ++i) m(i, i) = 1.0;
    return m;
  }
};

/// det of a SmallSym by LU with partial pivoting.
inline double determinant(const SmallSym& s) {
  const int n = s.n;
  std::array<double, SmallSym::max_dim * SmallSym::max_dim> m{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i * n + j] = s(i, j);
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[piv * n + j], m[c * n + j]);
      det = -det;
    }
    const double p = m[c * n + c];
    if (p == 0.0) return 0.0;
    det *= p;
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / p;
      for (int j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
    }
  }
  return det;
}

/// Cholesky of a SmallSym; returns false if not positive definite.
/// lower is stored in a SmallSym-shaped buffer (only i >= j entries used).
inline bool cholesky(const SmallSym& s, SmallSym& lower) {
  const int n = s.n;
  lower = SmallSym(n);
  for (int j = 0; j < n; ++j) {
    double d = s(j, j);
    for (int k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > 0.0)) return false;
    lower(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (int k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / lower(j, j);
    }
  }
  return true;
}

}  // namespace imcf
