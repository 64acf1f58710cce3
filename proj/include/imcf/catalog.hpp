#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "imcf/flow.hpp"
#include "imcf/homogeneous.hpp"
#include "imcf/spacelike.hpp"

namespace imcf {

/// A named initial-data recipe. Graph scenarios build a space-like graph
/// u = amplitude sin(f x) sin(f y) over the torus; form scenarios build the
/// homogeneous ODE states.
struct ScenarioSpec {
  std::string name;  // flat_torus | graph_torus | hyperbolic_form | flat_form | custom
  // graph parameters
  double amplitude = 0.2;
  double frequency = 1.0;
  int grid_nodes = 64;
  double period = 2.0 * M_PI;
  // form parameters
  int n = 2;
  double phi0 = 1.0;
  double base_volume = 4.0 * M_PI;
  int base_euler = -2;
  // randomized property suites
  unsigned seed = 12345;
  double default_t_end = 1.0;

  bool is_form() const { return name == "hyperbolic_form" || name == "flat_form"; }
  bool is_graph() const { return !is_form(); }
};

inline std::vector<ScenarioSpec> catalog_list() {
  std::vector<ScenarioSpec> out;
  {
    ScenarioSpec s;
    s.name = "flat_torus";
    s.amplitude = 0.0;
    s.default_t_end = 1.0;
    out.push_back(s);
  }
  {
    ScenarioSpec s;
    s.name = "graph_torus";
    s.amplitude = 0.2;
    s.frequency = 1.0;
    s.grid_nodes = 64;
    s.default_t_end = 2.0;
    out.push_back(s);
  }
  {
    ScenarioSpec s;
    s.name = "hyperbolic_form";
    s.n = 2;
    s.phi0 = 1.0;
    s.base_volume = 4.0 * M_PI;  // genus-2 area from the curvature integral
    s.base_euler = -2;
    s.default_t_end = 10.0;
    out.push_back(s);
  }
  {
    ScenarioSpec s;
    s.name = "flat_form";
    s.n = 2;
    s.phi0 = 1.0;
    s.base_volume = std::pow(2.0 * M_PI, 2);
    s.base_euler = 0;
    s.default_t_end = 1.0;
    out.push_back(s);
  }
  return out;
}

inline ScenarioSpec find_scenario(const std::string& name) {
  for (const ScenarioSpec& s : catalog_list())
    if (s.name == name) return s;
  if (name == "custom") {
    ScenarioSpec s;
    s.name = "custom";
    s.default_t_end = 2.0;
    return s;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

/// Built initial data: exactly one of the two members is set.
struct ScenarioState {
  std::optional<SpacelikeState> grid_state;
  std::optional<HomogeneousState> form_state;

  bool homogeneous() const { return form_state.has_value(); }
};

inline ScenarioState build_state(const ScenarioSpec& spec) {
  ScenarioState out;
  if (spec.name == "hyperbolic_form") {
    out.form_state = homogeneous_hyperbolic(spec.n, spec.phi0, spec.base_volume, spec.base_euler);
  } else if (spec.name == "flat_form") {
    out.form_state = homogeneous_flat(spec.n, spec.phi0, spec.base_volume);
  } else if (spec.name == "flat_torus" || spec.name == "graph_torus" || spec.name == "custom") {
    if (std::abs(spec.amplitude) * spec.frequency >= 1.0)
      throw std::invalid_argument("graph scenario violates the space-like bound: "
                                  "amplitude * frequency must stay below 1");
    const GridChart grid(2, spec.grid_nodes, spec.period);
    ScalarField u(grid.node_count(), 0.0);
    if (spec.name != "flat_torus" && spec.amplitude != 0.0) {
      for (int i = 0; i < grid.nodes_per_axis; ++i)
        for (int j = 0; j < grid.nodes_per_axis; ++j)
          u.v[grid.node(i, j)] = spec.amplitude * std::sin(spec.frequency * grid.coordinate(i)) *
                                 std::sin(spec.frequency * grid.coordinate(j));
    }
    out.grid_state = from_graph(grid, u);
  } else {
    throw std::invalid_argument("unknown scenario: " + spec.name);
  }
  return out;
}

// --- JSON bindings ----------------------------------------------------------

inline nlohmann::json to_json(const ScenarioSpec& s) {
  return nlohmann::json{{"name", s.name},
                        {"amplitude", s.amplitude},
                        {"frequency", s.frequency},
                        {"grid_nodes", s.grid_nodes},
                        {"period", s.period},
                        {"n", s.n},
                        {"phi0", s.phi0},
                        {"base_volume", s.base_volume},
                        {"base_euler", s.base_euler},
                        {"seed", s.seed}};
}

inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  ScenarioSpec s = find_scenario(j.at("name").get<std::string>());
  if (j.contains("amplitude")) s.amplitude = j.at("amplitude").get<double>();
  if (j.contains("frequency")) s.frequency = j.at("frequency").get<double>();
  if (j.contains("grid_nodes")) s.grid_nodes = j.at("grid_nodes").get<int>();
  if (j.contains("period")) s.period = j.at("period").get<double>();
  if (j.contains("n")) s.n = j.at("n").get<int>();
  if (j.contains("phi0")) s.phi0 = j.at("phi0").get<double>();
  if (j.contains("base_volume")) s.base_volume = j.at("base_volume").get<double>();
  if (j.contains("base_euler")) s.base_euler = j.at("base_euler").get<int>();
  if (j.contains("seed")) s.seed = j.at("seed").get<unsigned>();
  return s;
}

inline nlohmann::json to_json(const FlowConfig& c) {
  return nlohmann::json{
      {"form", c.form == FlowForm::simplified ? "simplified" : "general"},
      {"cfl_constant", c.cfl_constant},
      {"t_end", c.t_end},
      {"checkpoint_t0", c.checkpoint_t0},
      {"max_steps", c.max_steps},
      {"det_floor", c.det_floor},
      {"residual_ceiling_factor", c.residual_ceiling_factor},
      {"residual_ceiling_offset", c.residual_ceiling_offset}};
}

/// Strict parse: unknown keys are rejected so configuration typos surface
/// as invalid input instead of silently using defaults.
inline FlowConfig flow_config_from_json(const nlohmann::json& j, FlowConfig base = {}) {
  static const char* known[] = {"form",      "cfl_constant", "t_end",
                                "checkpoint_t0", "max_steps",    "det_floor",
                                "residual_ceiling_factor", "residual_ceiling_offset",
                                "scenario"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("unknown config key: " + it.key());
  }
  FlowConfig c = base;
  if (j.contains("form")) {
    const std::string f = j.at("form").get<std::string>();
    if (f == "simplified")
      c.form = FlowForm::simplified;
    else if (f == "general")
      c.form = FlowForm::general;
    else
      throw std::invalid_argument("config form must be 'simplified' or 'general'");
  }
  if (j.contains("cfl_constant")) c.cfl_constant = j.at("cfl_constant").get<double>();
  if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
  if (j.contains("checkpoint_t0")) c.checkpoint_t0 = j.at("checkpoint_t0").get<double>();
  if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<long>();
  if (j.contains("det_floor")) c.det_floor = j.at("det_floor").get<double>();
  if (j.contains("residual_ceiling_factor"))
    c.residual_ceiling_factor = j.at("residual_ceiling_factor").get<double>();
  if (j.contains("residual_ceiling_offset"))
    c.residual_ceiling_offset = j.at("residual_ceiling_offset").get<double>();
  c.validate();
  return c;
}

}  // namespace imcf
