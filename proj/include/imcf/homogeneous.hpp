#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "imcf/errors.hpp"
#include "imcf/gbc.hpp"

namespace imcf {

/// Space-form solution reduced to two scalars: g = phi * g0, h = psi * g0
/// on a compact base of unit curvature scale. No grid realizes these bases
/// (a genus-2 surface has no periodic flat chart), so the base volume and
/// Euler characteristic are carried as data.
struct HomogeneousState {
  int n = 2;             // even dimension
  double phi = 1.0;      // metric scale, > 0
  double psi = 0.0;      // second-form scale
  double t = 0.0;
  double base_volume = 1.0;
  int base_euler = 0;

  double volume() const { return std::pow(phi, n / 2.0) * base_volume; }
  double mean_curvature() const { return n * psi / phi; }
  double a2() const { return n * psi * psi / (phi * phi); }
  /// |sectional curvature| of the scaled space form.
  double sectional_bound() const { return psi * psi / (phi * phi); }
  bool is_flat() const { return psi == 0.0; }
};

/// Hyperbolic base (sectional curvature -1 for g0): the Gauss equation with
/// h = psi g0 forces phi = psi^2. Volume and Euler characteristic must agree
/// with the curvature integral, chi = (-1)^{n/2} * 2 * base_volume / vol(S^n).
inline HomogeneousState homogeneous_hyperbolic(int n, double phi0, double base_volume,
                                               int base_euler) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("homogeneous state dimension must be even and >= 2, got " +
                                std::to_string(n));
  if (!(phi0 > 0.0)) throw std::invalid_argument("phi0 must be positive");
  if (!(base_volume > 0.0)) throw std::invalid_argument("base volume must be positive");
  const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  const double chi = sign * 2.0 * base_volume / sphere_volume(n);
  if (std::abs(chi - base_euler) > 1e-9 * (1.0 + std::abs(chi)))
    throw std::invalid_argument("base volume " + std::to_string(base_volume) +
                                " inconsistent with Euler characteristic " +
                                std::to_string(base_euler) + " (curvature integral gives " +
                                std::to_string(chi) + ")");
  return HomogeneousState{n, phi0, std::sqrt(phi0), 0.0, base_volume, base_euler};
}

/// Flat base: psi = 0, any positive phi; the flow fixes it.
inline HomogeneousState homogeneous_flat(int n, double phi0, double base_volume) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("homogeneous state dimension must be even and >= 2, got " +
                                std::to_string(n));
  if (!(phi0 > 0.0)) throw std::invalid_argument("phi0 must be positive");
  if (!(base_volume > 0.0)) throw std::invalid_argument("base volume must be positive");
  return HomogeneousState{n, phi0, 0.0, 0.0, base_volume, 0};
}

/// Euler characteristic of a homogeneous state in closed form:
/// (-1)^{n/2} (2 / vol S^n) (psi/phi)^n phi^{n/2} base_volume. On the
/// hyperbolic constraint phi = psi^2 the scale factors cancel, so the value
/// is constant along the flow.
inline double euler_characteristic(const HomogeneousState& s) {
  const double sign = (s.n / 2) % 2 == 0 ? 1.0 : -1.0;
  const double ratio = s.psi / s.phi;
  return sign * 2.0 / sphere_volume(s.n) * std::pow(ratio, s.n) *
         std::pow(s.phi, s.n / 2.0) * s.base_volume;
}

}  // namespace imcf
