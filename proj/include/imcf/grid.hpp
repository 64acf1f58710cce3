#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

/// Uniform periodic chart. Every axis shares the node count and the period;
/// node k sits at coordinate k * spacing(). The PDE layer runs on
/// dimension == 2; the even-dimension requirement is structural.
struct GridChart {
  int dimension;
  int nodes_per_axis;
  double period;

  GridChart(int dimension_, int nodes_per_axis_, double period_)
      : dimension(dimension_), nodes_per_axis(nodes_per_axis_), period(period_) {
    if (dimension < 2 || dimension % 2 != 0)
      throw std::invalid_argument("grid dimension must be even and >= 2, got " +
                                  std::to_string(dimension));
    if (nodes_per_axis < 8)
      throw std::invalid_argument(
          "need at least 8 nodes per axis for central stencils, got " +
          std::to_string(nodes_per_axis));
    if (!(period > 0.0)) throw std::invalid_argument("grid period must be positive");
  }

  double spacing() const { return period / nodes_per_axis; }

  long node_count() const {
    long n = 1;
    for (int d = 0; d < dimension; ++d) n *= nodes_per_axis;
    return n;
  }

  /// Coordinate volume of one grid cell, spacing^dimension.
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dimension; ++d) v *= spacing();
    return v;
  }

  double coordinate(int k) const { return k * spacing(); }

  // 2-d node addressing.
  long node(int i, int j) const { return static_cast<long>(i) * nodes_per_axis + j; }

  int wrap(int k) const {
    const int m = nodes_per_axis;
    k %= m;
    return k < 0 ? k + m : k;
  }

  void require_2d(const char* op) const {
    if (dimension != 2)
      throw std::invalid_argument(std::string(op) + " requires a 2-d chart, grid has dimension " +
                                  std::to_string(dimension));
  }

  bool operator==(const GridChart&) const = default;
};

}  // namespace imcf
