#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "imcf/fields.hpp"
#include "imcf/grid.hpp"
#include "imcf/spacelike.hpp"

namespace imcf {

/// Flat binary field layout (little endian, documented in docs/formats.md):
///   u32 dimension, u32 nodes_per_axis, f64 period, u32 components,
/// followed by node-major row-major f64 component data.
struct FieldData {
  int dimension = 2;
  int nodes_per_axis = 0;
  double period = 0.0;
  int components = 1;
  std::vector<double> values;

  GridChart grid() const { return GridChart(dimension, nodes_per_axis, period); }
};

inline void write_field(const std::filesystem::path& path, const GridChart& grid, int components,
                        const std::vector<double>& values) {
  if (static_cast<long>(values.size()) != grid.node_count() * components)
    throw std::invalid_argument("field size does not match grid");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const uint32_t dim = grid.dimension, nodes = grid.nodes_per_axis, comp = components;
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&nodes), 4);
  out.write(reinterpret_cast<const char*>(&grid.period), 8);
  out.write(reinterpret_cast<const char*>(&comp), 4);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

inline FieldData read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  uint32_t dim = 0, nodes = 0, comp = 0;
  double period = 0.0;
  in.read(reinterpret_cast<char*>(&dim), 4);
  in.read(reinterpret_cast<char*>(&nodes), 4);
  in.read(reinterpret_cast<char*>(&period), 8);
  in.read(reinterpret_cast<char*>(&comp), 4);
  if (!in) throw std::runtime_error("truncated field header in " + path.string());
  FieldData f;
  f.dimension = static_cast<int>(dim);
  f.nodes_per_axis = static_cast<int>(nodes);
  f.period = period;
  f.components = static_cast<int>(comp);
  const long count = f.grid().node_count() * f.components;
  f.values.resize(count);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("truncated field body in " + path.string());
  return f;
}

/// JSON form of the same layout, for small grids and debugging.
inline nlohmann::json field_to_json(const GridChart& grid, int components,
                                    const std::vector<double>& values) {
  return nlohmann::json{{"dimension", grid.dimension},
                        {"nodes_per_axis", grid.nodes_per_axis},
                        {"period", grid.period},
                        {"components", components},
                        {"values", values}};
}

inline FieldData field_from_json(const nlohmann::json& j) {
  FieldData f;
  f.dimension = j.at("dimension").get<int>();
  f.nodes_per_axis = j.at("nodes_per_axis").get<int>();
  f.period = j.at("period").get<double>();
  f.components = j.at("components").get<int>();
  f.values = j.at("values").get<std::vector<double>>();
  if (static_cast<long>(f.values.size()) != f.grid().node_count() * f.components)
    throw std::invalid_argument("JSON field size does not match grid");
  return f;
}

/// State serialization: a directory holding g.bin, h.bin and a JSON header
/// with the time, scenario name and construction parameters.
inline void save_state(const std::filesystem::path& dir, const SpacelikeState& state,
                       const std::string& scenario = "",
                       const nlohmann::json& parameters = nlohmann::json::object()) {
  std::filesystem::create_directories(dir);
  write_field(dir / "g.bin", state.grid, SymTensorField::ncomp, state.g.v);
  write_field(dir / "h.bin", state.grid, SymTensorField::ncomp, state.h.v);
  nlohmann::json header{{"t", state.t},
                        {"scenario", scenario},
                        {"parameters", parameters},
                        {"dimension", state.grid.dimension},
                        {"nodes_per_axis", state.grid.nodes_per_axis},
                        {"period", state.grid.period}};
  std::ofstream out(dir / "state.json");
  if (!out) throw std::runtime_error("cannot write state header in " + dir.string());
  out << header.dump(2) << '\n';
}

inline SpacelikeState load_state(const std::filesystem::path& dir,
                                 nlohmann::json* header_out = nullptr) {
  std::ifstream in(dir / "state.json");
  if (!in) throw std::runtime_error("cannot read state header in " + dir.string());
  nlohmann::json header = nlohmann::json::parse(in);
  const FieldData gf = read_field(dir / "g.bin");
  const FieldData hf = read_field(dir / "h.bin");
  if (gf.nodes_per_axis != hf.nodes_per_axis || gf.period != hf.period)
    throw std::runtime_error("g and h fields disagree on the grid in " + dir.string());
  const GridChart grid = gf.grid();
  SymTensorField g(grid.node_count(), Variance::covariant);
  SymTensorField h(grid.node_count(), Variance::covariant);
  g.v = gf.values;
  h.v = hf.values;
  if (header_out) *header_out = header;
  return SpacelikeState(grid, std::move(g), std::move(h), header.at("t").get<double>());
}

}  // namespace imcf
