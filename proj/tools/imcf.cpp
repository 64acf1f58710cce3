// Command-line front end: scenario catalog, flow runs with verdicts,
// randomized oracle suites and verdict re-verification.
//
// Exit codes: 0 all checks pass, 1 check failure or verdict mismatch,
// 2 flow abort, 3 invalid input.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imcf/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitAbort = 2;
constexpr int kExitInvalidInput = 3;

void print_check(const imcf::CheckResult& c) {
  std::printf("  [%s] %-24s value=%-13.6g threshold=%-13.6g %s\n", c.pass ? "PASS" : "FAIL",
              c.name.c_str(), c.value, c.threshold, c.note.c_str());
}

int cmd_catalog() {
  std::printf("%-16s %-42s %s\n", "name", "parameters", "default t_end");
  for (const imcf::ScenarioSpec& s : imcf::catalog_list()) {
    std::ostringstream params;
    if (s.is_form())
      params << "n=" << s.n << " phi0=" << s.phi0 << " base_volume=" << s.base_volume
             << " chi=" << s.base_euler;
    else
      params << "amplitude=" << s.amplitude << " frequency=" << s.frequency
             << " grid=" << s.grid_nodes;
    std::printf("%-16s %-42s %g\n", s.name.c_str(), params.str().c_str(), s.default_t_end);
  }
  return kExitPass;
}

struct RunFlags {
  std::string scenario = "graph_torus";
  bool scenario_explicit = false;
  std::string config_path;
  std::string out_dir = "run_out";
  double t_end = -1.0;
  int grid = -1;
  double cfl = -1.0;
  double amplitude = std::numeric_limits<double>::quiet_NaN();
  double frequency = std::numeric_limits<double>::quiet_NaN();
  std::string form;
  unsigned seed = 0;
  bool have_seed = false;
  bool snapshots = false;
};

int cmd_run(const RunFlags& flags) {
  // Precedence: catalog defaults < config file < command-line flags.
  nlohmann::json config_json = nlohmann::json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      std::fprintf(stderr, "cannot open config file %s\n", flags.config_path.c_str());
      return kExitInvalidInput;
    }
    config_json = nlohmann::json::parse(in);
  }

  imcf::ScenarioSpec spec = imcf::find_scenario(flags.scenario);
  if (config_json.contains("scenario")) {
    nlohmann::json sj = config_json.at("scenario");
    if (flags.scenario_explicit || !sj.contains("name")) sj["name"] = spec.name;
    spec = imcf::scenario_from_json(sj);
  }
  if (flags.grid > 0) spec.grid_nodes = flags.grid;
  if (!std::isnan(flags.amplitude)) spec.amplitude = flags.amplitude;
  if (!std::isnan(flags.frequency)) spec.frequency = flags.frequency;
  if (flags.have_seed) spec.seed = flags.seed;

  imcf::FlowConfig base;
  base.t_end = spec.default_t_end;
  imcf::FlowConfig config = imcf::flow_config_from_json(config_json, base);
  if (flags.t_end > 0.0) config.t_end = flags.t_end;
  if (flags.cfl > 0.0) config.cfl_constant = flags.cfl;
  if (!flags.form.empty())
    config.form = flags.form == "general" ? imcf::FlowForm::general : imcf::FlowForm::simplified;
  config.validate();

  imcf::RunOptions options;
  options.out_dir = flags.out_dir;
  options.write_snapshots = flags.snapshots;
  const imcf::RunReport report = imcf::run_scenario(spec, config, options);

  std::printf("scenario %s to t = %g (%zu checkpoints)\n", spec.name.c_str(), config.t_end,
              report.trajectory.records.size());
  for (const imcf::CheckResult& c : report.checks) print_check(c);
  if (!report.abort_reason.empty())
    std::printf("flow aborted: %s\n", report.abort_reason.c_str());
  std::printf("wrote %s\n", report.json_path.string().c_str());
  return report.exit_code();
}

int cmd_oracle(int trials, const std::string& dims_csv, unsigned seed,
               const std::string& out_path) {
  std::vector<int> dims;
  std::stringstream ss(dims_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) dims.push_back(std::stoi(tok));
  const imcf::OracleReport report = imcf::oracle(trials, dims, seed);
  for (const auto& g : report.gbc)
    std::printf("  [%s] gbc equivalence n=%d trials=%d max_rel_dev=%.3g tol=%.3g\n",
                g.pass ? "PASS" : "FAIL", g.n, g.trials, g.max_rel_dev, g.tolerance);
  for (const auto& d : report.det)
    std::printf("  [%s] det inequality n=%d draws=%ld violations=%ld\n", d.pass ? "PASS" : "FAIL",
                d.n, d.draws, d.violations);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << imcf::to_json(report).dump(2) << "\n";
  }
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

int cmd_verify(const std::string& dir) {
  imcf::VerifyResult r;
  try {
    r = imcf::verify_report(dir);
  } catch (const std::exception& e) {
    // Nothing runs during verification, so any failure here is bad input.
    std::fprintf(stderr, "invalid report: %s\n", e.what());
    return kExitInvalidInput;
  }
  for (const std::string& m : r.mismatches) std::printf("  mismatch: %s\n", m.c_str());
  std::printf("verify: verdicts %s, recomputed checks %s\n",
              r.consistent ? "consistent" : "INCONSISTENT", r.all_pass ? "all pass" : "FAIL");
  return (r.consistent && r.all_pass) ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intrinsic curvature flow simulator and verification monitors"};
  app.require_subcommand(1);

  app.add_subcommand("catalog", "list built-in scenarios with their defaults");

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "evolve a scenario and evaluate every check");
  auto* scen_opt =
      run->add_option("--scenario", run_flags.scenario, "scenario name (see `catalog`), or custom");
  run->add_option("--config", run_flags.config_path, "JSON flow configuration");
  run->add_option("--t-end", run_flags.t_end, "integration horizon");
  run->add_option("--grid", run_flags.grid, "nodes per axis for grid scenarios");
  run->add_option("--cfl", run_flags.cfl, "CFL constant in (0, 1]");
  run->add_option("--amplitude", run_flags.amplitude, "graph amplitude");
  run->add_option("--frequency", run_flags.frequency, "graph frequency");
  run->add_option("--form", run_flags.form, "flow form: simplified | general")
      ->check(CLI::IsMember({"simplified", "general"}));
  run->add_option("--out", run_flags.out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", run_flags.seed, "seed recorded with the run");
  run->add_flag("--snapshots", run_flags.snapshots, "write state snapshots per checkpoint");

  int trials = 100;
  std::string dims = "2,4";
  unsigned oracle_seed = 12345;
  std::string oracle_out;
  CLI::App* orc = app.add_subcommand("oracle", "randomized GBC and inequality suites");
  orc->add_option("--trials", trials, "trials per dimension");
  orc->add_option("--dims", dims, "comma-separated dimensions from {2,4,6}");
  orc->add_option("--seed", oracle_seed, "RNG seed");
  orc->add_option("--out", oracle_out, "write the JSON report here");

  std::string report_dir;
  CLI::App* ver = app.add_subcommand("verify", "re-check verdicts from a stored run");
  ver->add_option("--report", report_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalidInput;
  }

  try {
    if (app.got_subcommand("catalog")) return cmd_catalog();
    if (app.got_subcommand("run")) {
      run_flags.have_seed = seed_opt->count() > 0;
      run_flags.scenario_explicit = scen_opt->count() > 0;
      return cmd_run(run_flags);
    }
    if (app.got_subcommand("oracle")) return cmd_oracle(trials, dims, oracle_seed, oracle_out);
    if (app.got_subcommand("verify")) return cmd_verify(report_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "flow abort: %s\n", e.what());
    return kExitAbort;
  }
  return kExitInvalidInput;
}
