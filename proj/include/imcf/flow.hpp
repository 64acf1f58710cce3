#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "imcf/homogeneous.hpp"
#include "imcf/spacelike.hpp"

namespace imcf {

enum class FlowForm { general, simplified };

/// Time-stepping policy. Checkpoints form the geometric sequence
/// t0 * 2^k; the step before a checkpoint is shortened to land on it
/// exactly. The homogeneous ODE layer derives its fixed step from the same
/// CFL knob.
struct FlowConfig {
  FlowForm form = FlowForm::simplified;
  double cfl_constant = 0.2;  // in (0, 1]
  double t_end = 1.0;
  double checkpoint_t0 = 0.125;
  long max_steps = 2000000;
  double det_floor = 1e-10;
  double residual_ceiling_factor = 10.0;
  double residual_ceiling_offset = 1e-4;

  void validate() const {
    if (!(cfl_constant > 0.0) || cfl_constant > 1.0)
      throw std::invalid_argument("cfl_constant must lie in (0, 1]");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(checkpoint_t0 > 0.0)) throw std::invalid_argument("checkpoint_t0 must be positive");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");
  }

  /// Sorted times at which monitors are emitted: 0, the geometric sequence
  /// up to t_end, and t_end itself.
  std::vector<double> checkpoints() const {
    std::vector<double> out{0.0};
    for (double t = checkpoint_t0; t < t_end; t *= 2.0) out.push_back(t);
    out.push_back(t_end);
    return out;
  }

  double homogeneous_dt() const { return cfl_constant * 2.5e-3; }
};

struct FlowTendency {
  SymTensorField dg;
  SymTensorField dh;
};

namespace detail {

struct StateScalars {
  std::vector<double> trace;  // H per node
  std::vector<double> a2;     // |A|^2 per node
};

inline StateScalars trace_and_norm(const SymTensorField& gi, const SymTensorField& h) {
  const long nodes = h.nodes();
  StateScalars out{std::vector<double>(nodes), std::vector<double>(nodes)};
  for (long n = 0; n < nodes; ++n) {
    double tr = 0.0, a2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        tr += gi.at(n, i, j) * h.at(n, i, j);
        double hij_up = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) hij_up += gi.at(n, i, k) * gi.at(n, j, l) * h.at(n, k, l);
        a2 += hij_up * h.at(n, i, j);
      }
    out.trace[n] = tr;
    out.a2[n] = a2;
  }
  return out;
}

}  // namespace detail

/// Simplified flow for states satisfying the Gauss/Codazzi constraints:
/// dg = 2 H h, dh = lap h + 2 H h_im h_jn g^{mn} - |A|^2 h. Packed storage
/// keeps both tendencies exactly symmetric.
inline FlowTendency tendency_simplified(const SpacelikeState& state) {
  const long nodes = state.g.nodes();
  const SymTensorField gi = metric_inverse(state.g);
  const ThirdOrderField gamma = detail::christoffel_from_inverse(state.grid, state.g, gi);
  const ThirdOrderField t = detail::covariant_gradient_sym2_from(state.grid, gamma, state.h);
  const SymTensorField lap = detail::traced_second_gradient(state.grid, gamma, gi, t);
  const detail::StateScalars sc = detail::trace_and_norm(gi, state.h);

  FlowTendency out{SymTensorField(nodes), SymTensorField(nodes)};
  for (long n = 0; n < nodes; ++n) {
    double hgh[2][2] = {};  // h_im g^{mn} h_nj, upper triangle
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double s = 0.0;
        for (int mm = 0; mm < 2; ++mm)
          for (int nn = 0; nn < 2; ++nn)
            s += state.h.at(n, i, mm) * gi.at(n, mm, nn) * state.h.at(n, nn, j);
        hgh[i][j] = s;
      }
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        out.dg.at(n, i, j) = 2.0 * sc.trace[n] * state.h.at(n, i, j);
        out.dh.at(n, i, j) = lap.at(n, i, j) + 2.0 * sc.trace[n] * hgh[i][j] -
                             sc.a2[n] * state.h.at(n, i, j);
      }
  }
  return out;
}

/// General flow, written with the curvature terms assembled from the metric:
/// dg = -2 Ric + 2 h_ik h_jl g^{kl},
/// dh = lap h - Ric_im h_nj g^{mn} - Ric_jm h_ni g^{mn}
///      + 2 h_im h_jn h_kl g^{mk} g^{ln} - |A|^2 h.
/// On constraint-satisfying states this agrees with tendency_simplified to
/// O(spacing^2).
inline FlowTendency tendency_general(const SpacelikeState& state) {
  const long nodes = state.g.nodes();
  const SymTensorField gi = metric_inverse(state.g);
  const ThirdOrderField gamma = detail::christoffel_from_inverse(state.grid, state.g, gi);
  const ThirdOrderField t = detail::covariant_gradient_sym2_from(state.grid, gamma, state.h);
  const SymTensorField lap = detail::traced_second_gradient(state.grid, gamma, gi, t);
  const CurvatureField r = riemann_curvature(state.grid, state.g);
  const detail::StateScalars sc = detail::trace_and_norm(gi, state.h);

  FlowTendency out{SymTensorField(nodes), SymTensorField(nodes)};
  for (long n = 0; n < nodes; ++n) {
    double ric[2][2];  // Ric_ij = g^{kl} R_{kilj}
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) s += gi.at(n, k, l) * r.at(n, k, i, l, j);
        ric[i][j] = s;
      }
    double hup[2][2];  // h with the second index raised
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int mm = 0; mm < 2; ++mm) s += state.h.at(n, i, mm) * gi.at(n, mm, j);
        hup[i][j] = s;
      }
    double hgh[2][2], hghgh[2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int mm = 0; mm < 2; ++mm) s += hup[i][mm] * state.h.at(n, mm, j);
        hgh[i][j] = s;
      }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int mm = 0; mm < 2; ++mm) s += hgh[i][mm] * gi.at(n, mm, 0) * state.h.at(n, 0, j) +
                                            hgh[i][mm] * gi.at(n, mm, 1) * state.h.at(n, 1, j);
        hghgh[i][j] = s;
      }
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        out.dg.at(n, i, j) = -2.0 * ric[i][j] + 2.0 * hgh[i][j];
        double richij = 0.0, richji = 0.0;
        for (int mm = 0; mm < 2; ++mm)
          for (int nn = 0; nn < 2; ++nn) {
            richij += ric[i][mm] * gi.at(n, mm, nn) * state.h.at(n, nn, j);
            richji += ric[j][mm] * gi.at(n, mm, nn) * state.h.at(n, nn, i);
          }
        out.dh.at(n, i, j) = lap.at(n, i, j) - richij - richji + 2.0 * hghgh[i][j] -
                             sc.a2[n] * state.h.at(n, i, j);
      }
  }
  return out;
}

/// Homogeneous reduction of the simplified flow under g = phi g0,
/// h = psi g0 (lap h = 0 for parallel h):
///   dphi = 2 n psi^2 / phi,  dpsi = n psi^3 / phi^2.
/// Requires the flat base (psi = 0) or the hyperbolic constraint phi = psi^2.
/// Integrator stages visit O(dt^2) excursions off the manifold, so the guard
/// here is loose; emitted checkpoint states are held to 1e-9 relative.
inline std::pair<double, double> tendency_homogeneous(const HomogeneousState& s) {
  if (s.psi != 0.0) {
    const double defect = std::abs(s.phi - s.psi * s.psi);
    if (defect > 1e-2 * std::max(1.0, s.phi)) throw ConstraintViolation(defect);
  }
  const double dphi = 2.0 * s.n * s.psi * s.psi / s.phi;
  const double dpsi = s.n * s.psi * s.psi * s.psi / (s.phi * s.phi);
  return {dphi, dpsi};
}

/// Parabolic step restriction for the explicit integrator:
/// cfl * spacing^2 / (2 n sup lambda_max(g^-1)) / (1 + sup |A|^2).
/// |A|^2 decays along the flow, so the step grows; callers re-evaluate
/// every step.
inline double stable_timestep(const SpacelikeState& state, const FlowConfig& config) {
  const long nodes = state.g.nodes();
  const SymTensorField gi = metric_inverse(state.g);
  const detail::StateScalars sc = detail::trace_and_norm(gi, state.h);
  double lam_max = 0.0, a2_max = 0.0;
  for (long n = 0; n < nodes; ++n) {
    lam_max = std::max(lam_max, sym_eigenvalues_2x2(gi.matrix(n))[1]);
    a2_max = std::max(a2_max, sc.a2[n]);
  }
  const double dx = state.grid.spacing();
  return config.cfl_constant * dx * dx / (2.0 * SpacelikeState::dim * lam_max) / (1.0 + a2_max);
}

namespace detail {

inline void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline SpacelikeState stage_state(const SpacelikeState& base, double a, const FlowTendency& k) {
  SpacelikeState s = base;
  axpy(s.g.v, a, k.dg.v);
  axpy(s.h.v, a, k.dh.v);
  return s;
}

inline void verify_positive_definite(const SymTensorField& g) {
  Mat<2> lower;
  const long nodes = g.nodes();
  for (long n = 0; n < nodes; ++n)
    if (!cholesky(g.matrix(n), lower)) throw NotPositiveDefinite(n);
}

}  // namespace detail

/// One classic four-stage explicit step. Stage states inherit the packed
/// symmetric storage, so re-symmetrization is exact by construction; the
/// advanced metric is re-verified positive definite.
inline SpacelikeState step(const SpacelikeState& state, double dt, FlowForm form) {
  auto tendency = [&](const SpacelikeState& s) {
    return form == FlowForm::simplified ? tendency_simplified(s) : tendency_general(s);
  };
  const FlowTendency k1 = tendency(state);
  const FlowTendency k2 = tendency(detail::stage_state(state, dt / 2.0, k1));
  const FlowTendency k3 = tendency(detail::stage_state(state, dt / 2.0, k2));
  const FlowTendency k4 = tendency(detail::stage_state(state, dt, k3));

  SpacelikeState out = state;
  for (size_t i = 0; i < out.g.v.size(); ++i) {
    out.g.v[i] += dt / 6.0 * (k1.dg.v[i] + 2.0 * k2.dg.v[i] + 2.0 * k3.dg.v[i] + k4.dg.v[i]);
    out.h.v[i] += dt / 6.0 * (k1.dh.v[i] + 2.0 * k2.dh.v[i] + 2.0 * k3.dh.v[i] + k4.dh.v[i]);
  }
  detail::verify_positive_definite(out.g);
  out.t = state.t + dt;
  return out;
}

/// Four-stage step of the homogeneous ODE pair.
inline HomogeneousState step_homogeneous(const HomogeneousState& state, double dt) {
  auto f = [&](double phi, double psi) {
    HomogeneousState s = state;
    s.phi = phi;
    s.psi = psi;
    return tendency_homogeneous(s);
  };
  const auto k1 = f(state.phi, state.psi);
  const auto k2 = f(state.phi + dt / 2.0 * k1.first, state.psi + dt / 2.0 * k1.second);
  const auto k3 = f(state.phi + dt / 2.0 * k2.first, state.psi + dt / 2.0 * k2.second);
  const auto k4 = f(state.phi + dt * k3.first, state.psi + dt * k3.second);
  HomogeneousState out = state;
  out.phi += dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
  out.psi += dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
  out.t += dt;
  return out;
}

struct ScalarEvolutionResidual {
  double resH = 0.0;
  double resA2 = 0.0;
};

/// Forward-difference consistency check of the derived scalar evolutions:
/// advances one step, forms (f(t+dt) - f(t)) / dt for H and |A|^2 and
/// subtracts the analytic right sides lap H - H |A|^2 and
/// lap |A|^2 - 2 |grad A|^2 - 2 |A|^4. Sup-norm residuals are
/// O(dt) + O(spacing^2).
inline ScalarEvolutionResidual scalar_evolution_residual(const SpacelikeState& state, double dt) {
  const DerivedScalars before = derived_scalars(state);
  const SpacelikeState advanced = step(state, dt, FlowForm::simplified);
  const DerivedScalars after = derived_scalars(advanced);
  const ScalarField lapH = laplace_beltrami(state.grid, state.g, before.H);
  const ScalarField lapA2 = laplace_beltrami(state.grid, state.g, before.A2);

  ScalarEvolutionResidual out;
  const long nodes = state.g.nodes();
  for (long n = 0; n < nodes; ++n) {
    const double dHdt = (after.H.v[n] - before.H.v[n]) / dt;
    const double dA2dt = (after.A2.v[n] - before.A2.v[n]) / dt;
    const double rhsH = lapH.v[n] - before.H.v[n] * before.A2.v[n];
    const double rhsA2 =
        lapA2.v[n] - 2.0 * before.gradA2.v[n] - 2.0 * before.A2.v[n] * before.A2.v[n];
    out.resH = std::max(out.resH, std::abs(dHdt - rhsH));
    out.resA2 = std::max(out.resA2, std::abs(dA2dt - rhsA2));
  }
  return out;
}

}  // namespace imcf
