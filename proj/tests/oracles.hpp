#pragma once

// Reference evaluations of the discrete calculus, written from the stencil
// definitions independently of the library loops.

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridbie/fields.hpp"

namespace gridbie::testing {

inline bool on_side(const GridGeometry& g, int p, Side side) { return g.in_plus(p) == is_plus(side); }

/// Value of u seen from `p` along (axis, dir), reading the extension value
/// across a cut interval.
inline double neighbor_value(const GridGeometry& g, const ExtendedField& u, int p, int axis, int dir) {
  const int cut = g.cut_towards(p, axis, dir);
  return cut >= 0 ? u.ext[cut] : u.values[g.neighbor(p, axis, dir)];
}

inline std::vector<double> oracle_laplacian(const GridGeometry& g, const ExtendedField& u) {
  std::vector<double> lap(g.num_points(), 0.0);
  const double h2 = g.h() * g.h();
  for (int p = 0; p < g.num_points(); ++p) {
    if (!on_side(g, p, u.side) || g.on_box_boundary(p)) continue;
    double sum = -2.0 * g.dim() * u.values[p];
    for (int a = 0; a < g.dim(); ++a)
      for (int dir : {-1, 1}) sum += neighbor_value(g, u, p, a, dir);
    lap[p] = sum / h2;
  }
  return lap;
}

/// Dirichlet form summed over every grid interval touching the side.
inline double oracle_inner(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v) {
  double sum = 0.0;
  for (int p = 0; p < g.num_points(); ++p) {
    for (int a = 0; a < g.dim(); ++a) {
      const int q = g.neighbor(p, a, 1);
      if (q < 0) continue;
      const int cut = g.cut_on_edge(p, a);
      double w = 0.0, du = 0.0, dv = 0.0;
      if (cut >= 0) {
        const auto& c = g.cuts()[cut];
        w = is_plus(u.side) ? c.xi : 1.0 - c.xi;
        const bool p_own = on_side(g, p, u.side);
        du = p_own ? u.ext[cut] - u.values[p] : u.values[q] - u.ext[cut];
        dv = p_own ? v.ext[cut] - v.values[p] : v.values[q] - v.ext[cut];
      } else if (on_side(g, p, u.side) && on_side(g, q, u.side)) {
        w = 1.0;
        du = u.values[q] - u.values[p];
        dv = v.values[q] - v.values[p];
      }
      sum += w * du * dv / (g.h() * g.h());
    }
  }
  return sum * g.cell_volume();
}

/// Relative residual of sum (Lap u) v + <u,v> = -/+ sum (Du)(Mv)(Dchi).
inline double oracle_green(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v) {
  const auto lap = oracle_laplacian(g, u);
  double volume = 0.0, volume_abs = 0.0;
  for (int p = 0; p < g.num_points(); ++p) {
    volume += lap[p] * v.values[p];
    volume_abs += std::abs(lap[p] * v.values[p]);
  }
  volume *= g.cell_volume();
  volume_abs *= g.cell_volume();
  double boundary = 0.0;
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    const double ul = endpoint_value(g, u, id, c.lower), uu = endpoint_value(g, u, id, c.upper);
    const double vl = endpoint_value(g, v, id, c.lower), vu = endpoint_value(g, v, id, c.upper);
    const double mv = (1.0 - c.s1) * vl + c.s1 * vu;
    const double dchi = (c.lower_plus ? -1.0 : 1.0) / g.h();
    boundary += (uu - ul) / g.h() * mv * dchi;
  }
  boundary *= g.cell_volume();
  const double energy = oracle_inner(g, u, v);
  const double residual = is_plus(u.side) ? volume + energy + boundary : volume + energy - boundary;
  return std::abs(residual) / std::max(1.0, volume_abs + std::abs(energy));
}

inline ExtendedField sample(const GridGeometry& g, Side side, const ScalarFunction& f) {
  auto u = ExtendedField::zeros(g, side);
  for (int p = 0; p < g.num_points(); ++p)
    if (on_side(g, p, side)) u.values[p] = f(g.coords(p));
  for (int id = 0; id < g.num_cuts(); ++id)
    u.ext[id] = f(g.coords(g.cuts()[id].end_on(!is_plus(side))));
  return u;
}

}  // namespace gridbie::testing
