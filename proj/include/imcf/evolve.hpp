#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "imcf/flow.hpp"
#include "imcf/monitors.hpp"

namespace imcf {

using MonitorSink = std::function<void(const MonitorRecord&)>;

/// Integrate a grid state to config.t_end, emitting a monitor row at t = 0,
/// at every geometric checkpoint and at t_end. The step is re-evaluated from
/// the CFL bound every iteration and shortened to land on checkpoints
/// exactly. Abort conditions (determinant floor every step, residual ceiling
/// at checkpoints, step budget) return the partial trajectory with the
/// reason attached rather than discarding it.
inline Trajectory evolve(const SpacelikeState& initial, const FlowConfig& config,
                         const MonitorSink& sink = {}, bool keep_snapshots = true) {
  config.validate();
  Trajectory traj;
  traj.homogeneous = false;
  traj.n = SpacelikeState::dim;
  traj.spacing = initial.grid.spacing();

  SpacelikeState state = initial;
  const DerivedScalars d0 = derived_scalars(state);
  double amax2_initial = 0.0;
  for (double a2 : d0.A2.v) amax2_initial = std::max(amax2_initial, a2);

  const double initial_gauss = gauss_residual(state).sup;
  const double residual_ceiling =
      config.residual_ceiling_factor * initial_gauss + config.residual_ceiling_offset;

  auto emit = [&](double dt) {
    MonitorRecord r = compute_monitor(state, dt, amax2_initial);
    traj.records.push_back(r);
    if (keep_snapshots) traj.snapshots.push_back(state);
    if (sink) sink(r);
    if (r.gauss_res > residual_ceiling) {
      traj.abort_reason = "residual ceiling: gauss residual " + format_double(r.gauss_res) +
                          " > " + format_double(residual_ceiling);
      return false;
    }
    return true;
  };

  const std::vector<double> checkpoints = config.checkpoints();
  if (!emit(stable_timestep(state, config))) return traj;

  long steps = 0;
  for (size_t c = 1; c < checkpoints.size(); ++c) {
    const double target = checkpoints[c];
    double dt = 0.0;
    while (state.t < target) {
      if (steps >= config.max_steps) {
        traj.abort_reason = "max_steps reached at t = " + format_double(state.t);
        return traj;
      }
      dt = stable_timestep(state, config);
      const double remaining = target - state.t;
      bool landing = false;
      if (dt >= remaining) {
        dt = remaining;
        landing = true;
      }
      state = step(state, dt, config.form);
      if (landing) state.t = target;  // pin the checkpoint time exactly
      ++steps;
      double det_min = std::numeric_limits<double>::infinity();
      const long nodes = state.g.nodes();
      for (long n = 0; n < nodes; ++n)
        det_min = std::min(det_min, sym_determinant<2>(state.g.matrix(n)));
      if (det_min < config.det_floor) {
        traj.abort_reason = "metric determinant " + format_double(det_min) +
                            " under floor at t = " + format_double(state.t);
        return traj;
      }
    }
    if (!emit(dt)) return traj;
  }
  return traj;
}

/// ODE analogue for homogeneous states, fixed step from the config.
inline Trajectory evolve_homogeneous(const HomogeneousState& initial, const FlowConfig& config,
                                     const MonitorSink& sink = {}) {
  config.validate();
  Trajectory traj;
  traj.homogeneous = true;
  traj.n = initial.n;
  traj.spacing = 0.0;

  HomogeneousState state = initial;
  const double amax2_initial = state.a2();
  const double dt_fixed = config.homogeneous_dt();

  auto emit = [&](double dt) {
    if (state.psi != 0.0) {
      const double defect = std::abs(state.phi - state.psi * state.psi);
      if (defect > 1e-9 * std::max(1.0, state.phi)) throw ConstraintViolation(defect);
    }
    MonitorRecord r = compute_monitor(state, dt, amax2_initial);
    traj.records.push_back(r);
    traj.homogeneous_states.push_back(state);
    if (sink) sink(r);
  };

  const std::vector<double> checkpoints = config.checkpoints();
  emit(dt_fixed);
  long steps = 0;
  for (size_t c = 1; c < checkpoints.size(); ++c) {
    const double target = checkpoints[c];
    double dt = dt_fixed;
    while (state.t < target) {
      if (steps >= config.max_steps) {
        traj.abort_reason = "max_steps reached at t = " + format_double(state.t);
        return traj;
      }
      dt = dt_fixed;
      const double remaining = target - state.t;
      bool landing = false;
      if (dt >= remaining) {
        dt = remaining;
        landing = true;
      }
      state = step_homogeneous(state, dt);
      if (landing) state.t = target;
      ++steps;
    }
    emit(dt);
  }
  return traj;
}

}  // namespace imcf
