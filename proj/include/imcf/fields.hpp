#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "imcf/grid.hpp"
#include "imcf/linalg.hpp"

namespace imcf {

enum class Variance { covariant, contravariant };

struct ScalarField {
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(long nodes, double fill = 0.0) : v(nodes, fill) {}

  long nodes() const { return static_cast<long>(v.size()); }
  double& at(long node) { return v[node]; }
  double at(long node) const { return v[node]; }

  bool all_finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

/// Symmetric rank-2 tensor per node, packed upper triangle (xx, xy, yy for
/// the 2-d layer). Packing makes the symmetry invariant exact by storage.
struct SymTensorField {
  static constexpr int ncomp = sym_count<2>;

  Variance variance = Variance::covariant;
  std::vector<double> v;  // node * ncomp + packed component

  SymTensorField() = default;
  explicit SymTensorField(long nodes, Variance var = Variance::covariant)
      : variance(var), v(nodes * ncomp, 0.0) {}

  long nodes() const { return static_cast<long>(v.size()) / ncomp; }

  double& at(long node, int c) { return v[node * ncomp + c]; }
  double at(long node, int c) const { return v[node * ncomp + c]; }
  double& at(long node, int i, int j) { return v[node * ncomp + sym_index<2>(i, j)]; }
  double at(long node, int i, int j) const { return v[node * ncomp + sym_index<2>(i, j)]; }

  SymMat<2> matrix(long node) const {
    SymMat<2> m;
    for (int c = 0; c < ncomp; ++c) m.a[c] = v[node * ncomp + c];
    return m;
  }
  void set_matrix(long node, const SymMat<2>& m) {
    for (int c = 0; c < ncomp; ++c) v[node * ncomp + c] = m.a[c];
  }

  static SymTensorField constant(long nodes, const SymMat<2>& m,
                                 Variance var = Variance::covariant) {
    SymTensorField f(nodes, var);
    for (long n = 0; n < nodes; ++n) f.set_matrix(n, m);
    return f;
  }
};

/// Rank-3 tensor per node, symmetric in the last two slots: first index free,
/// last pair packed. Layout fits both Christoffel symbols (free upper index)
/// and covariant gradients of symmetric 2-tensors (free derivative index).
struct ThirdOrderField {
  static constexpr int ncomp = 2 * sym_count<2>;

  std::vector<double> v;  // node * ncomp + (free * 3 + packed)

  ThirdOrderField() = default;
  explicit ThirdOrderField(long nodes) : v(nodes * ncomp, 0.0) {}

  long nodes() const { return static_cast<long>(v.size()) / ncomp; }

  double& at(long node, int free, int j, int k) {
    return v[node * ncomp + free * sym_count<2> + sym_index<2>(j, k)];
  }
  double at(long node, int free, int j, int k) const {
    return v[node * ncomp + free * sym_count<2> + sym_index<2>(j, k)];
  }
};

/// Fully covariant rank-4 curvature tensor per node, dense 2^4 layout.
struct CurvatureField {
  static constexpr int ncomp = 16;

  std::vector<double> v;

  CurvatureField() = default;
  explicit CurvatureField(long nodes) : v(nodes * ncomp, 0.0) {}

  long nodes() const { return static_cast<long>(v.size()) / ncomp; }

  static int index(int i, int j, int k, int l) { return ((i * 2 + j) * 2 + k) * 2 + l; }

  double& at(long node, int i, int j, int k, int l) { return v[node * ncomp + index(i, j, k, l)]; }
  double at(long node, int i, int j, int k, int l) const {
    return v[node * ncomp + index(i, j, k, l)];
  }
};

}  // namespace imcf
