#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "imcf/catalog.hpp"
#include "imcf/evolve.hpp"
#include "imcf/io.hpp"
#include "imcf/svg.hpp"

namespace imcf {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

/// Every named check evaluated on a trajectory. All values derive from the
/// monitor rows (the CSV columns), so `verify` can recompute them from a
/// stored run. Thresholds are pinned here, per scenario family.
inline std::vector<CheckResult> evaluate_checks(const Trajectory& traj,
                                                const ScenarioSpec& spec) {
  const auto& rows = traj.records;
  if (rows.empty()) throw std::invalid_argument("trajectory has no records");
  std::vector<CheckResult> out;
  const bool form = traj.homogeneous;
  const double dx2 = traj.spacing * traj.spacing;

  auto push = [&](const std::string& name, bool pass, double value, double threshold,
                  std::string note = "") {
    out.push_back({name, pass, value, threshold, std::move(note)});
  };

  {  // monotone integrals, nonincreasing within the discretization allowance
    double inc_mh = -std::numeric_limits<double>::infinity();
    double inc_ma = inc_mh, scale_mh = 0.0, scale_ma = 0.0;
    for (size_t k = 0; k + 1 < rows.size(); ++k) {
      inc_mh = std::max(inc_mh, rows[k + 1].mh - rows[k].mh);
      inc_ma = std::max(inc_ma, rows[k + 1].ma - rows[k].ma);
      scale_mh = std::max(scale_mh, rows[k].mh);
      scale_ma = std::max(scale_ma, rows[k].ma);
    }
    if (rows.size() < 2) inc_mh = inc_ma = 0.0;
    const double tol_mh = 1e-6 + 1e-4 * scale_mh;
    const double tol_ma = 1e-6 + 1e-4 * scale_ma;
    push("monotonicity_mh", inc_mh <= tol_mh, inc_mh, tol_mh);
    push("monotonicity_ma", inc_ma <= tol_ma, inc_ma, tol_ma);
  }

  {  // decay of t * pinching integral across the checkpoint sequence
    const MonitorRecord* first = rows.size() > 1 ? &rows[1] : &rows[0];
    const MonitorRecord& last = rows.back();
    if (first->pinch <= 1e-12) {
      push("pinch_decay", true, first->pinch, 1e-12, "pinching integral already zero (umbilic)");
    } else if (last.t < 4.0 * first->t) {
      push("pinch_decay", true, 0.0, 1.0, "horizon shorter than two checkpoint doublings");
    } else {
      const double ratio = (last.t * last.pinch) / (first->t * first->pinch);
      push("pinch_decay", ratio < 1.0, ratio, 1.0);
    }
  }

  {  // decay estimate
    const double viol = amax_bound_check(traj);
    const double tol = form ? 1e-8 : 1e-6 + dx2;
    push("amax_bound", viol <= tol, viol, tol);
  }

  {  // volume growth
    const VolumeGrowthReport r = volume_growth_check(traj);
    push("volume_growth_rate", r.max_rate_violation <= 0.0, r.max_rate_violation, 0.0);
    push("volume_growth_integral", r.max_integral_violation <= 1e-4, r.max_integral_violation,
         1e-4);
    push("volume_growth_ratio", true, r.final_ratio, r.ratio_bound,
         "finite-horizon ratio against the asymptotic bound; reported, not asserted");
  }

  {  // bounded (1/(1+t)) integral |A|^{n-2} dv; witness for the growth constant
    double witness = 0.0;
    for (size_t k = 0; k < rows.size(); ++k) {
      double integral;  // integral |A|^{n-2} dv
      if (traj.n == 2) {
        integral = rows[k].vol;
      } else {
        const HomogeneousState& s = traj.homogeneous_states.at(k);
        integral = std::pow(s.a2(), (s.n - 2) / 2.0) * s.volume();
      }
      witness = std::max(witness, integral / (1.0 + rows[k].t));
    }
    const double initial = traj.n == 2 ? rows[0].vol
                                       : std::pow(traj.homogeneous_states.at(0).a2(),
                                                  (traj.n - 2) / 2.0) *
                                             traj.homogeneous_states.at(0).volume();
    if (form) {
      push("c1_witness", true, witness, 2.0 * initial,
           "witness recorded only: the expanding soliton ratio approaches 2n x initial, so no "
           "fixed 2x bound applies");
    } else {
      push("c1_witness", witness <= 2.0 * initial, witness, 2.0 * initial);
    }
  }

  {  // Cauchy-Schwarz chain per checkpoint
    double worst = -std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const MonitorRecord& r : rows) {
      worst = std::max(worst, r.gbc_gap - r.cs_bound);
      scale = std::max(scale, r.cs_bound);
    }
    const double tol = 1e-9 * (1.0 + scale);
    push("chain_gap", worst <= tol, worst, tol);
  }

  const double sign = (traj.n / 2) % 2 == 0 ? 1.0 : -1.0;
  const double vols = sphere_volume(traj.n);
  const double npow = std::pow(double(traj.n), traj.n);
  auto energy_gap_at = [&](const MonitorRecord& r) {
    return r.mh / vols - sign * npow / 2.0 * r.chi;
  };

  {  // corollary energy inequality at every checkpoint
    double worst = std::numeric_limits<double>::infinity();
    for (const MonitorRecord& r : rows) worst = std::min(worst, energy_gap_at(r));
    push("energy_gap", worst >= -1e-9, worst, -1e-9);
  }

  {  // equality cases: space forms and the flat torus sit at equality, the
     // graph torus is strictly above it
    const bool equality_case = form || spec.name == "flat_torus";
    if (equality_case) {
      double worst = 0.0;
      for (const MonitorRecord& r : rows) worst = std::max(worst, std::abs(energy_gap_at(r)));
      push("energy_case", worst <= 1e-9, worst, 1e-9, "equality case");
    } else {
      const double g0 = energy_gap_at(rows.front());
      push("energy_case", g0 > 1e-12, g0, 1e-12, "strictly non-umbilic initial data");
    }
  }

  {  // Euler characteristic against the scenario topology
    double expected = 0.0, tol = 1e-9;
    if (spec.name == "hyperbolic_form") {
      expected = spec.base_euler;
      tol = 1e-9;
    } else if (spec.name == "flat_form" || spec.name == "flat_torus") {
      expected = 0.0;
      tol = 1e-9;
    } else {
      // Torus topology. The integration error scales with the nodes per
      // data wavelength, so a coarse grid under high-frequency data may
      // honestly fail to certify chi; refine the grid in that case.
      expected = 0.0;
      const double ppw = spec.grid_nodes / std::max(spec.frequency, 1.0);
      tol = 1e-3 * (128.0 / ppw) * (128.0 / ppw);
    }
    double worst = 0.0;
    for (const MonitorRecord& r : rows) worst = std::max(worst, std::abs(r.chi - expected));
    push("chi_check", worst <= tol, worst, tol);
  }

  {  // triangle inequality tying chi, the mean-curvature integral and the gap
    double worst = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (const MonitorRecord& r : rows) {
      const double lhs = std::abs(sign * r.chi - 2.0 / vols * r.mh / npow);
      worst = std::max(worst, lhs - 2.0 / vols * r.gbc_gap);
      scale = std::max(scale, std::abs(r.chi));
    }
    const double tol = 1e-12 * scale;
    push("gbc_triangle", worst <= tol, worst, tol);
  }

  {  // minimal-volume certificate
    const MinvolCertificate cert = minvol_certificate(traj);
    if (spec.name == "hyperbolic_form") {
      double dev = 0.0;
      for (const CertificateEntry& e : cert.entries)
        dev = std::max(dev, std::abs(e.rescaled_volume - cert.entries.front().rescaled_volume));
      push("certificate", cert.verdict == CertificateVerdict::obstructed && dev <= 1e-6, dev,
           1e-6, "expected obstruction (chi != 0): rescaled volume stabilizes");
    } else {
      const double first = cert.entries.front().rescaled_volume;
      const double ratio = first > 1e-12 ? cert.entries.back().rescaled_volume / first : 0.0;
      push("certificate", cert.verdict == CertificateVerdict::collapse, ratio, 0.2,
           "expected collapse (chi = 0): rescaled volume decays");
    }
  }

  {  // constraint preservation along the flow
    double g_worst = 0.0, c_worst = 0.0;
    for (const MonitorRecord& r : rows) {
      g_worst = std::max(g_worst, r.gauss_res);
      c_worst = std::max(c_worst, r.codazzi_res);
    }
    const double g_tol = form ? 1e-12 : 3.0 * rows.front().gauss_res + 5.0 * dx2;
    const double c_tol = form ? 1e-12 : 3.0 * rows.front().codazzi_res + 5.0 * dx2;
    push("constraint_gauss", g_worst <= g_tol, g_worst, g_tol);
    push("constraint_codazzi", c_worst <= c_tol, c_worst, c_tol);
  }

  return out;
}

struct RunReport {
  ScenarioSpec scenario;
  FlowConfig config;
  Trajectory trajectory;
  std::vector<CheckResult> checks;
  std::string abort_reason;
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
  std::vector<std::filesystem::path> svg_paths;

  bool all_pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
  /// CLI exit code convention: 0 all pass, 1 check failure, 2 flow abort.
  int exit_code() const { return !abort_reason.empty() ? 2 : (all_pass() ? 0 : 1); }
};

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline nlohmann::json checks_to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json j = nlohmann::json::object();
  for (const CheckResult& c : checks) {
    nlohmann::json e{{"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}};
    if (!c.note.empty()) e["note"] = c.note;
    j[c.name] = e;
  }
  return j;
}

inline std::vector<SvgSeries> series_of(const std::vector<MonitorRecord>& rows,
                                        std::initializer_list<std::pair<const char*, double MonitorRecord::*>> cols) {
  std::vector<SvgSeries> out;
  for (const auto& [label, member] : cols) {
    SvgSeries s;
    s.label = label;
    for (const MonitorRecord& r : rows) {
      s.x.push_back(r.t);
      s.y.push_back(r.*member);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

struct RunOptions {
  bool write_outputs = true;
  bool write_snapshots = false;
  std::filesystem::path out_dir = "run_out";
};

/// Construct the scenario, evolve it, evaluate every check and (optionally)
/// write CSV + JSON verdicts + SVG plots into the output directory.
inline RunReport run_scenario(const ScenarioSpec& spec, const FlowConfig& config,
                              const RunOptions& options = {}) {
  RunReport report;
  report.scenario = spec;
  report.config = config;

  const ScenarioState initial = build_state(spec);
  if (initial.homogeneous()) {
    report.trajectory = evolve_homogeneous(*initial.form_state, config);
  } else {
    report.trajectory = evolve(*initial.grid_state, config, {}, options.write_snapshots);
  }
  report.abort_reason = report.trajectory.abort_reason;
  report.checks = evaluate_checks(report.trajectory, spec);

  if (options.write_outputs) {
    std::filesystem::create_directories(options.out_dir);
    report.csv_path = options.out_dir / "trajectory.csv";
    detail::write_text(report.csv_path, to_csv(report.trajectory.records));

    const auto& rows = report.trajectory.records;
    const std::vector<std::pair<std::string, std::string>> plots = {
        {"functionals.svg",
         render_line_chart("monotone functionals and volume",
                           detail::series_of(rows, {{"vol", &MonitorRecord::vol},
                                                    {"MH", &MonitorRecord::mh},
                                                    {"MA", &MonitorRecord::ma},
                                                    {"pinch", &MonitorRecord::pinch}}))},
        {"bounds.svg",
         render_line_chart("decay bound and residuals",
                           detail::series_of(rows, {{"amax2", &MonitorRecord::amax2},
                                                    {"bound24", &MonitorRecord::bound24},
                                                    {"gauss_res", &MonitorRecord::gauss_res},
                                                    {"codazzi_res", &MonitorRecord::codazzi_res}}))},
        {"certificate.svg",
         render_line_chart("collapse certificate and Euler characteristic",
                           detail::series_of(rows, {{"cert", &MonitorRecord::cert},
                                                    {"chi", &MonitorRecord::chi}}))}};
    for (const auto& [name, svg] : plots) {
      const std::filesystem::path p = options.out_dir / name;
      detail::write_text(p, svg);
      report.svg_paths.push_back(p);
    }

    if (options.write_snapshots && !report.trajectory.snapshots.empty()) {
      int k = 0;
      for (const SpacelikeState& s : report.trajectory.snapshots)
        save_state(options.out_dir / ("snapshot_" + std::to_string(k++)), s, spec.name,
                   to_json(spec));
    }

    nlohmann::json j{{"scenario", to_json(spec)},
                     {"config", to_json(config)},
                     {"n", report.trajectory.n},
                     {"spacing", report.trajectory.spacing},
                     {"homogeneous", report.trajectory.homogeneous},
                     {"abort_reason", report.abort_reason},
                     {"checks", detail::checks_to_json(report.checks)},
                     {"csv", "trajectory.csv"}};
    nlohmann::json plot_names = nlohmann::json::array();
    for (const auto& p : report.svg_paths) plot_names.push_back(p.filename().string());
    j["plots"] = plot_names;
    report.json_path = options.out_dir / "report.json";
    detail::write_text(report.json_path, j.dump(2) + "\n");
  }
  return report;
}

// --- oracle -----------------------------------------------------------------

struct OracleReport {
  struct GbcResult {
    int n = 0;
    int trials = 0;
    double max_rel_dev = 0.0;
    double tolerance = 0.0;
    bool pass = false;
  };
  struct DetResult {
    int n = 0;
    long draws = 0;
    long violations = 0;
    bool pass = false;
  };
  std::vector<GbcResult> gbc;
  std::vector<DetResult> det;

  bool all_pass() const {
    for (const auto& r : gbc)
      if (!r.pass) return false;
    for (const auto& r : det)
      if (!r.pass) return false;
    return true;
  }
};

/// Randomized equivalence of the two Gauss-Bonnet-Chern density routes plus
/// the pointwise eigenvalue inequality. Deterministic for a fixed seed.
inline OracleReport oracle(int trials, const std::vector<int>& dims, unsigned seed,
                           long det_draws = 100000) {
  OracleReport report;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  for (int n : dims) {
    if (n != 2 && n != 4 && n != 6)
      throw std::invalid_argument("oracle dims must be drawn from {2, 4, 6}");
    OracleReport::GbcResult res;
    res.n = n;
    res.trials = trials;
    res.tolerance = n == 2 ? 1e-12 : (n == 4 ? 1e-10 : 1e-9);
    for (int trial = 0; trial < trials; ++trial) {
      double b[SmallSym::max_dim][SmallSym::max_dim];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = uni(rng);
      SmallSym g(n), h(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = (i == j) ? 0.3 : 0.0;
          for (int k = 0; k < n; ++k) s += b[k][i] * b[k][j];
          g(i, j) = s;
        }
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const double v = uni(rng);
          h(i, j) = v;
          h(j, i) = v;
        }
      const double cf = chern_density_closed_form(g, h, n);
      const double pf = chern_density_pfaffian(g, h, n);
      res.max_rel_dev =
          std::max(res.max_rel_dev, std::abs(pf - cf) / (1.0 + std::abs(cf)));
    }
    res.pass = res.max_rel_dev <= res.tolerance;
    report.gbc.push_back(res);
  }

  std::uniform_real_distribution<double> lam(-10.0, 10.0);
  for (int n : {2, 4, 6}) {
    OracleReport::DetResult res;
    res.n = n;
    res.draws = det_draws;
    std::vector<double> eigen(n);
    for (long d = 0; d < det_draws; ++d) {
      for (double& x : eigen) x = lam(rng);
      if (!pointwise_det_inequality(eigen).holds) ++res.violations;
    }
    res.pass = res.violations == 0;
    report.det.push_back(res);
  }
  return report;
}

inline nlohmann::json to_json(const OracleReport& r) {
  nlohmann::json gbc = nlohmann::json::array();
  for (const auto& g : r.gbc)
    gbc.push_back({{"n", g.n},
                   {"trials", g.trials},
                   {"max_rel_dev", g.max_rel_dev},
                   {"tolerance", g.tolerance},
                   {"pass", g.pass}});
  nlohmann::json det = nlohmann::json::array();
  for (const auto& d : r.det)
    det.push_back(
        {{"n", d.n}, {"draws", d.draws}, {"violations", d.violations}, {"pass", d.pass}});
  return nlohmann::json{{"gbc_equivalence", gbc},
                        {"det_inequality", det},
                        {"all_pass", r.all_pass()}};
}

// --- verify -----------------------------------------------------------------

struct VerifyResult {
  bool consistent = true;   // recomputed verdicts match the stored ones
  bool all_pass = true;     // recomputed verdicts all pass
  std::vector<std::string> mismatches;
};

/// Re-derive every check from the stored CSV and compare against the stored
/// verdict map.
inline VerifyResult verify_report(const std::filesystem::path& dir) {
  std::ifstream jin(dir / "report.json");
  if (!jin) throw std::runtime_error("cannot read " + (dir / "report.json").string());
  const nlohmann::json stored = nlohmann::json::parse(jin);

  std::ifstream cin_(dir / stored.at("csv").get<std::string>(), std::ios::binary);
  if (!cin_) throw std::runtime_error("cannot read trajectory CSV in " + dir.string());
  std::string csv((std::istreambuf_iterator<char>(cin_)), std::istreambuf_iterator<char>());

  Trajectory traj;
  traj.records = parse_csv(csv);
  traj.homogeneous = stored.at("homogeneous").get<bool>();
  traj.n = stored.at("n").get<int>();
  traj.spacing = stored.at("spacing").get<double>();
  traj.abort_reason = stored.at("abort_reason").get<std::string>();
  if (traj.homogeneous && traj.n != 2)
    throw std::runtime_error("verify supports homogeneous trajectories with n = 2 only");

  const ScenarioSpec spec = scenario_from_json(stored.at("scenario"));
  const std::vector<CheckResult> fresh = evaluate_checks(traj, spec);

  VerifyResult result;
  const nlohmann::json& stored_checks = stored.at("checks");
  for (const CheckResult& c : fresh) {
    result.all_pass = result.all_pass && c.pass;
    if (!stored_checks.contains(c.name)) {
      result.consistent = false;
      result.mismatches.push_back(c.name + ": missing from stored report");
      continue;
    }
    const nlohmann::json& s = stored_checks.at(c.name);
    if (s.at("pass").get<bool>() != c.pass) {
      result.consistent = false;
      result.mismatches.push_back(c.name + ": stored pass=" +
                                  (s.at("pass").get<bool>() ? "true" : "false") +
                                  ", recomputed pass=" + (c.pass ? "true" : "false"));
      continue;
    }
    const double sv = s.at("value").get<double>();
    if (std::abs(sv - c.value) > 1e-9 * (1.0 + std::abs(c.value))) {
      result.consistent = false;
      result.mismatches.push_back(c.name + ": stored value " + format_double(sv) +
                                  " != recomputed " + format_double(c.value));
    }
  }
  for (auto it = stored_checks.begin(); it != stored_checks.end(); ++it) {
    bool found = false;
    for (const CheckResult& c : fresh) found = found || c.name == it.key();
    if (!found) {
      result.consistent = false;
      result.mismatches.push_back(it.key() + ": stored but not recomputed");
    }
  }
  return result;
}

}  // namespace imcf
