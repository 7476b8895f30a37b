#pragma once

#include <cmath>
#include <stdexcept>

#include "gridbie/geometry.hpp"

namespace gridbie::testing {

/// Grid point at (x, y[, z]); throws when no grid point is there.
inline int point_at(const GridGeometry& g, double x, double y, double z = 0.0) {
  for (int p = 0; p < g.num_points(); ++p) {
    const auto c = g.coords(p);
    if (std::abs(c[0] - x) < 1e-12 && std::abs(c[1] - y) < 1e-12 && std::abs(c[2] - z) < 1e-12)
      return p;
  }
  throw std::out_of_range("no grid point there");
}

/// Id of the cut interval with lower endpoint `lower` along `axis`.
inline int cut_at(const GridGeometry& g, int lower, int axis) {
  const int id = g.cut_on_edge(lower, axis);
  if (id < 0) throw std::out_of_range("interval is not cut");
  return id;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace gridbie::testing
