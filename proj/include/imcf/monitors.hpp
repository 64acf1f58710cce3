#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "imcf/gbc.hpp"
#include "imcf/homogeneous.hpp"
#include "imcf/spacelike.hpp"

namespace imcf {

/// One time-stamped row of every monitored functional. Column order of the
/// CSV serialization is part of the external interface and must not change.
struct MonitorRecord {
  double t = 0.0;
  double dt = 0.0;          // step size in force when the row was emitted
  double vol = 0.0;         // integral of dv
  double mh = 0.0;          // integral of H^n dv
  double ma = 0.0;          // integral of |A|^n dv
  double pinch = 0.0;       // integral of |A|^n |h - (H/n) g|^2 dv
  double amax2 = 0.0;       // sup |A|^2
  double bound24 = 0.0;     // 1 / (2 t + 1 / sup|A|^2(0)); 0 for flat data
  double gauss_res = 0.0;
  double codazzi_res = 0.0;
  double chi = 0.0;         // Euler characteristic by curvature integral
  double gbc_gap = 0.0;     // integral of |det h / det g - (H/n)^n| dv
  double cs_bound = 0.0;    // n sqrt(pinch) sqrt(integral |A|^{n-2} dv)
  double cert = 0.0;        // sup|K|^{n/2} * vol, the rescaled volume
};

/// Trajectory of a flow: monitor rows at checkpoints, optional state
/// snapshots, and enough metadata to re-evaluate every check from the rows.
struct Trajectory {
  std::vector<MonitorRecord> records;
  std::vector<SpacelikeState> snapshots;              // grid flows, when kept
  std::vector<HomogeneousState> homogeneous_states;   // ODE flows, per row
  std::string abort_reason;                           // empty on clean finish
  bool homogeneous = false;
  int n = 2;
  double spacing = 0.0;  // 0 for homogeneous trajectories

  bool aborted() const { return !abort_reason.empty(); }
};

namespace detail {

inline double decay_bound(double t, double amax2_initial) {
  // Degenerate flat data (sup|A|^2(0) = 0) reads the bound as the limit 0.
  if (!(amax2_initial > 0.0)) return 0.0;
  return 1.0 / (2.0 * t + 1.0 / amax2_initial);
}

}  // namespace detail

struct MonotoneFunctionals {
  double mh = 0.0;
  double ma = 0.0;
};

/// The two monotone integrals, integral H^n dv and integral |A|^n dv.
inline MonotoneFunctionals monotone_functionals(const SpacelikeState& state) {
  const DerivedScalars d = derived_scalars(state);
  const long nodes = state.g.nodes();
  ScalarField hn(nodes), an(nodes);
  for (long n = 0; n < nodes; ++n) {
    hn.v[n] = d.H.v[n] * d.H.v[n];
    an.v[n] = d.A2.v[n];
  }
  return {integrate_density(state.grid, state.g, hn),
          integrate_density(state.grid, state.g, an)};
}

inline MonotoneFunctionals monotone_functionals(const HomogeneousState& s) {
  const double H = s.mean_curvature();
  const double vol = s.volume();
  return {std::pow(H, s.n) * vol, std::pow(s.a2(), s.n / 2.0) * vol};
}

/// integral |A|^n |h - (H/n) g|^2 dv; zero exactly for umbilic states.
inline double pinching_integral(const SpacelikeState& state) {
  const DerivedScalars d = derived_scalars(state);
  const long nodes = state.g.nodes();
  ScalarField f(nodes);
  for (long n = 0; n < nodes; ++n) f.v[n] = d.A2.v[n] * d.traceless2.v[n];
  return integrate_density(state.grid, state.g, f);
}

inline double pinching_integral(const HomogeneousState&) { return 0.0; }

struct GbcChain {
  double gap = 0.0;       // integral |det h / det g - (H/n)^n| dv
  double cs_bound = 0.0;  // n sqrt(pinch) sqrt(integral |A|^{n-2} dv)
  bool holds = false;     // gap <= cs_bound + slack
};

/// The Cauchy-Schwarz chain bounding the Gauss-Bonnet-Chern defect.
/// For n = 2, |A|^{n-2} uses the 0^0 = 1 convention, so the last factor is
/// the volume; the bound only widens under that choice.
inline GbcChain gbc_approx_chain(const SpacelikeState& state) {
  const DerivedScalars d = derived_scalars(state);
  const long nodes = state.g.nodes();
  ScalarField defect(nodes);
  for (long n = 0; n < nodes; ++n) {
    const double detg = sym_determinant<2>(state.g.matrix(n));
    if (!(detg > 0.0)) throw NegativeDeterminant(n);
    const double ratio = sym_determinant<2>(state.h.matrix(n)) / detg;
    const double mean = d.H.v[n] / 2.0;
    defect.v[n] = std::abs(ratio - mean * mean);
  }
  GbcChain out;
  out.gap = integrate_density(state.grid, state.g, defect);
  const double pinch = pinching_integral(state);
  const double vol = integrate_density(state.grid, state.g, ScalarField(nodes, 1.0));
  out.cs_bound = 2.0 * std::sqrt(pinch) * std::sqrt(vol);
  out.holds = out.gap <= out.cs_bound + 1e-9 * (1.0 + out.cs_bound);
  return out;
}

inline GbcChain gbc_approx_chain(const HomogeneousState&) {
  // Umbilic: both the defect and the pinching integral vanish identically.
  return {0.0, 0.0, true};
}

struct DetInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Pointwise eigenvalue inequality
/// |prod lambda_i - (H/n)^n| <= n |A|^{n-1} |h - (H/n) g| in a frame where h
/// is diagonal. Valid for every real eigenvalue list of even length.
inline DetInequality pointwise_det_inequality(const std::vector<double>& eigenvalues) {
  const int n = static_cast<int>(eigenvalues.size());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("pointwise_det_inequality needs an even number of eigenvalues");
  double prod = 1.0, sum = 0.0, sum2 = 0.0;
  for (double lam : eigenvalues) {
    prod *= lam;
    sum += lam;
    sum2 += lam * lam;
  }
  const double mean = sum / n;
  double dev2 = 0.0;
  for (double lam : eigenvalues) dev2 += (lam - mean) * (lam - mean);
  DetInequality out;
  out.lhs = std::abs(prod - std::pow(mean, n));
  out.rhs = n * std::pow(sum2, (n - 1) / 2.0) * std::sqrt(dev2);
  out.holds = out.lhs <= out.rhs;
  return out;
}

/// Corollary energy gap, (1 / vol S^n) integral |H|^n dv
/// - (-1)^{n/2} (n^n / 2) chi. Nonnegative, zero exactly for hyperbolic and
/// flat space forms.
inline double corollary_energy_gap(const SpacelikeState& state, double chi) {
  const MonotoneFunctionals f = monotone_functionals(state);
  return f.mh / sphere_volume(2) + 2.0 * chi;  // n = 2: -(-1)^{n/2} n^n / 2 = +2
}

inline double corollary_energy_gap(const HomogeneousState& s, double chi) {
  const MonotoneFunctionals f = monotone_functionals(s);
  const double sign = (s.n / 2) % 2 == 0 ? 1.0 : -1.0;
  return f.mh / sphere_volume(s.n) - sign * std::pow(double(s.n), s.n) / 2.0 * chi;
}

/// Full monitor row for a grid state.
inline MonitorRecord compute_monitor(const SpacelikeState& state, double dt,
                                     double amax2_initial) {
  MonitorRecord r;
  r.t = state.t;
  r.dt = dt;
  const long nodes = state.g.nodes();
  const DerivedScalars d = derived_scalars(state);
  ScalarField one(nodes, 1.0), hn(nodes), an(nodes), pin(nodes), defect(nodes);
  double amax2 = 0.0, supk = 0.0;
  for (long n = 0; n < nodes; ++n) {
    hn.v[n] = d.H.v[n] * d.H.v[n];
    an.v[n] = d.A2.v[n];
    pin.v[n] = d.A2.v[n] * d.traceless2.v[n];
    const double detg = sym_determinant<2>(state.g.matrix(n));
    if (!(detg > 0.0)) throw NegativeDeterminant(n);
    const double ratio = sym_determinant<2>(state.h.matrix(n)) / detg;
    const double mean = d.H.v[n] / 2.0;
    defect.v[n] = std::abs(ratio - mean * mean);
    amax2 = std::max(amax2, d.A2.v[n]);
    supk = std::max(supk, std::abs(ratio));
  }
  r.vol = integrate_density(state.grid, state.g, one);
  r.mh = integrate_density(state.grid, state.g, hn);
  r.ma = integrate_density(state.grid, state.g, an);
  r.pinch = integrate_density(state.grid, state.g, pin);
  r.amax2 = amax2;
  r.bound24 = detail::decay_bound(state.t, amax2_initial);
  r.gauss_res = gauss_residual(state).sup;
  r.codazzi_res = codazzi_residual(state);
  r.chi = euler_characteristic(state);
  r.gbc_gap = integrate_density(state.grid, state.g, defect);
  r.cs_bound = 2.0 * std::sqrt(r.pinch) * std::sqrt(r.vol);
  r.cert = supk * r.vol;
  return r;
}

/// Full monitor row for a homogeneous state, in closed form. The exact
/// solution satisfies the constraints identically, so the residual columns
/// are zero by construction.
inline MonitorRecord compute_monitor(const HomogeneousState& s, double dt,
                                     double amax2_initial) {
  MonitorRecord r;
  r.t = s.t;
  r.dt = dt;
  r.vol = s.volume();
  const MonotoneFunctionals f = monotone_functionals(s);
  r.mh = f.mh;
  r.ma = f.ma;
  r.pinch = 0.0;
  r.amax2 = s.a2();
  r.bound24 = detail::decay_bound(s.t, amax2_initial);
  r.gauss_res = 0.0;
  r.codazzi_res = 0.0;
  r.chi = euler_characteristic(s);
  r.gbc_gap = 0.0;
  r.cs_bound = 0.0;
  r.cert = std::pow(s.sectional_bound(), s.n / 2.0) * r.vol;
  return r;
}

/// Max over checkpoints of sup|A|^2 minus the decay bound. Nonpositive up to
/// discretization error; the homogeneous hyperbolic flow saturates the bound.
inline double amax_bound_check(const Trajectory& traj) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const MonitorRecord& r : traj.records) worst = std::max(worst, r.amax2 - r.bound24);
  return worst;
}

struct VolumeGrowthReport {
  /// (a) worst defect of dVol/dt against the bracket of integral H^2 dv
  /// over each checkpoint interval (the integrand is monotone, so the mean
  /// value of the rate lies between the endpoint values).
  double max_rate_violation = 0.0;
  /// (b) worst violation of Vol^{2/n}(t) - Vol^{2/n}(0)
  ///     <= (2/n) integral_0^t MH^{2/n} ds (trapezoid in time).
  double max_integral_violation = 0.0;
  /// (c) finite-horizon ratio Vol / (1+t)^{n/2} against (2/n)^{n/2} MH at
  /// the final checkpoint; reported, never asserted.
  double final_ratio = 0.0;
  double ratio_bound = 0.0;
  bool ratio_decreasing = false;
};

inline VolumeGrowthReport volume_growth_check(const Trajectory& traj) {
  VolumeGrowthReport out;
  const auto& rows = traj.records;
  if (rows.size() < 2) return out;
  const int n = traj.n;

  // integral H^2 dv per row: equals MH when n = 2, closed form otherwise.
  std::vector<double> h2(rows.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    if (n == 2) {
      h2[k] = rows[k].mh;
    } else {
      const HomogeneousState& s = traj.homogeneous_states.at(k);
      h2[k] = s.mean_curvature() * s.mean_curvature() * s.volume();
    }
  }

  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    const double dtk = rows[k + 1].t - rows[k].t;
    if (!(dtk > 0.0)) continue;
    const double rate = (rows[k + 1].vol - rows[k].vol) / dtk;
    const double lo = std::min(h2[k], h2[k + 1]);
    const double hi = std::max(h2[k], h2[k + 1]);
    const double tol = 1e-6 + 1e-4 * (1.0 + hi) + traj.spacing * traj.spacing * (1.0 + hi);
    out.max_rate_violation =
        std::max({out.max_rate_violation, lo - tol - rate, rate - hi - tol});
  }

  const double p = 2.0 / n;
  double integral = 0.0;
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (size_t k = 1; k < rows.size(); ++k) {
    integral += 0.5 * (std::pow(rows[k - 1].mh, p) + std::pow(rows[k].mh, p)) *
                (rows[k].t - rows[k - 1].t);
    const double lhs = std::pow(rows[k].vol, p) - std::pow(rows[0].vol, p);
    out.max_integral_violation = std::max(out.max_integral_violation, lhs - p * integral);
    const double ratio = rows[k].vol / std::pow(1.0 + rows[k].t, n / 2.0);
    out.ratio_decreasing = ratio <= prev_ratio * (1.0 + 1e-9);
    prev_ratio = ratio;
  }
  out.final_ratio = rows.back().vol / std::pow(1.0 + rows.back().t, n / 2.0);
  out.ratio_bound = std::pow(p, n / 2.0) * rows.back().mh;
  return out;
}

struct CertificateEntry {
  double t = 0.0;
  double sup_k = 0.0;            // sup |sectional curvature|
  double rescaled_volume = 0.0;  // sup_k^{n/2} * vol, volume after rescaling to |K| <= 1
};

enum class CertificateVerdict { collapse, obstructed, indeterminate };

struct MinvolCertificate {
  std::vector<CertificateEntry> entries;
  CertificateVerdict verdict = CertificateVerdict::indeterminate;
};

/// Minimal-volume certificate: per checkpoint the volume of the state
/// rescaled so its sectional curvatures satisfy |K| <= 1. A decay to below
/// 0.2 x the first value certifies collapse (chi = 0 route); a stabilized
/// positive value reports the obstruction.
inline MinvolCertificate minvol_certificate(const Trajectory& traj) {
  if (traj.records.empty()) throw std::invalid_argument("empty trajectory");
  MinvolCertificate out;
  const double p = 2.0 / traj.n;
  for (const MonitorRecord& r : traj.records) {
    CertificateEntry e;
    e.t = r.t;
    e.rescaled_volume = r.cert;
    e.sup_k = r.vol > 0.0 ? std::pow(r.cert / r.vol, p) : 0.0;
    out.entries.push_back(e);
  }
  const double first = out.entries.front().rescaled_volume;
  const double last = out.entries.back().rescaled_volume;
  if (first <= 1e-12) {
    out.verdict = CertificateVerdict::collapse;  // flat data: already zero
  } else if (last < 0.2 * first) {
    out.verdict = CertificateVerdict::collapse;
  } else if (out.entries.size() >= 2) {
    const double prev = out.entries[out.entries.size() - 2].rescaled_volume;
    if (prev > 0.0 && std::abs(last / prev - 1.0) < 0.01)
      out.verdict = CertificateVerdict::obstructed;
  }
  return out;
}

inline const char* to_string(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::collapse: return "collapse";
    case CertificateVerdict::obstructed: return "obstructed";
    default: return "indeterminate";
  }
}

// --- CSV serialization ------------------------------------------------------

inline const char* monitor_csv_header() {
  return "t,dt,vol,MH,MA,pinch,amax2,bound24,gauss_res,codazzi_res,chi,gbc_gap,cs_bound,cert";
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string to_csv(const std::vector<MonitorRecord>& records) {
  std::string out = monitor_csv_header();
  out += '\n';
  for (const MonitorRecord& r : records) {
    const double cols[] = {r.t,     r.dt,        r.vol, r.mh,      r.ma,
                           r.pinch, r.amax2,     r.bound24, r.gauss_res, r.codazzi_res,
                           r.chi,   r.gbc_gap,   r.cs_bound, r.cert};
    bool first = true;
    for (double c : cols) {
      if (!first) out += ',';
      out += format_double(c);
      first = false;
    }
    out += '\n';
  }
  return out;
}

inline std::vector<MonitorRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (line != monitor_csv_header())
    throw std::invalid_argument("unexpected CSV header: " + line);
  std::vector<MonitorRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double cols[14];
    for (int c = 0; c < 14; ++c) {
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("short CSV row: " + line);
      cols[c] = std::stod(cell);
    }
    MonitorRecord r;
    r.t = cols[0];
    r.dt = cols[1];
    r.vol = cols[2];
    r.mh = cols[3];
    r.ma = cols[4];
    r.pinch = cols[5];
    r.amax2 = cols[6];
    r.bound24 = cols[7];
    r.gauss_res = cols[8];
    r.codazzi_res = cols[9];
    r.chi = cols[10];
    r.gbc_gap = cols[11];
    r.cs_bound = cols[12];
    r.cert = cols[13];
    out.push_back(r);
  }
  return out;
}

}  // namespace imcf
