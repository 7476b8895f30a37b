#include "gridbie/fields.hpp"

#include <cmath>
#include <string>

#include "gridbie/errors.hpp"

namespace gridbie {

namespace {

bool on_side(const GridGeometry& g, int point, Side side) {
  return g.in_plus(point) == is_plus(side);
}

void check_shape(const GridGeometry& g, const ExtendedField& u) {
  if (static_cast<int>(u.values.size()) != g.num_points() ||
      static_cast<int>(u.ext.size()) != g.num_cuts())
    throw FieldError("extended field does not match the grid geometry");
}

const std::vector<Edge>& own_edges(const GridGeometry& g, Side side) {
  return is_plus(side) ? g.plus_edges() : g.minus_edges();
}

double cut_weight(const CutInterval& c, Side side) { return is_plus(side) ? c.xi : 1.0 - c.xi; }

}  // namespace

ExtendedField ExtendedField::zeros(const GridGeometry& g, Side side) {
  return {side, std::vector<double>(g.num_points(), 0.0), std::vector<double>(g.num_cuts(), 0.0)};
}

double endpoint_value(const GridGeometry& g, const ExtendedField& u, int cut, int endpoint) {
  return on_side(g, endpoint, u.side) ? u.values[endpoint] : u.ext[cut];
}

double cut_difference(const GridGeometry& g, const ExtendedField& u, int cut) {
  const auto& c = g.cuts()[cut];
  return (endpoint_value(g, u, cut, c.upper) - endpoint_value(g, u, cut, c.lower)) / g.h();
}

IntervalFn trace(const GridGeometry& g, const ExtendedField& u) {
  check_shape(g, u);
  IntervalFn out(g.num_cuts());
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    out[id] = (1.0 - c.s1) * endpoint_value(g, u, id, c.lower) +
              c.s1 * endpoint_value(g, u, id, c.upper);
  }
  return out;
}

ExtendedField lift_from_trace(const GridGeometry& g, std::vector<double> values,
                              const IntervalFn& psi, Side side) {
  if (static_cast<int>(values.size()) != g.num_points() ||
      static_cast<int>(psi.size()) != g.num_cuts())
    throw FieldError("lift_from_trace: size mismatch");
  ExtendedField u{side, std::move(values), std::vector<double>(g.num_cuts())};
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    const int own = c.end_on(is_plus(side));
    const double s = c.s1_from(own);
    u.ext[id] = (psi[id] - (1.0 - s) * u.values[own]) / s;
  }
  return u;
}

std::vector<double> laplacian(const GridGeometry& g, const ExtendedField& u) {
  check_shape(g, u);
  std::vector<double> out(g.num_points(), 0.0);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const auto& points = is_plus(u.side) ? g.plus_points() : g.minus_points();
  for (int p : points) {
    double sum = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      for (int dir : {-1, 1}) {
        const int nb = g.neighbor(p, a, dir);
        double value;
        if (on_side(g, nb, u.side)) {
          value = u.values[nb];
        } else {
          const int cut = g.cut_towards(p, a, dir);
          if (cut < 0)
            throw FieldError("laplacian: missing extension value at grid point " +
                             std::to_string(p));
          value = u.ext[cut];
        }
        sum += value - u.values[p];
      }
    }
    out[p] = sum * inv_h2;
  }
  return out;
}

double inner(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v) {
  if (u.side != v.side) throw FieldError("inner: fields live on different sides");
  check_shape(g, u);
  check_shape(g, v);
  const double h = g.h();
  double sum = 0.0;
  for (const auto& e : own_edges(g, u.side))
    sum += (u.values[e.upper] - u.values[e.lower]) * (v.values[e.upper] - v.values[e.lower]);
  sum /= h * h;
  for (int id = 0; id < g.num_cuts(); ++id)
    sum += cut_difference(g, u, id) * cut_difference(g, v, id) * cut_weight(g.cuts()[id], u.side);
  return sum * g.cell_volume();
}

double boundary_sum(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v) {
  const auto mv = trace(g, v);
  double sum = 0.0;
  for (int id = 0; id < g.num_cuts(); ++id)
    sum += cut_difference(g, u, id) * mv[id] * g.cuts()[id].chi_jump() / g.h();
  return sum * g.cell_volume();
}

double green_residual(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v) {
  if (u.side != v.side) throw FieldError("green_residual: fields live on different sides");
  const auto lap = laplacian(g, u);
  double volume = 0.0, volume_abs = 0.0;
  for (int p = 0; p < g.num_points(); ++p) {
    volume += lap[p] * v.values[p];
    volume_abs += std::abs(lap[p] * v.values[p]);
  }
  volume *= g.cell_volume();
  volume_abs *= g.cell_volume();
  const double energy = inner(g, u, v);
  const double boundary = boundary_sum(g, u, v);
  // Plus side: volume + energy = -boundary. Minus side: volume + energy = +boundary.
  const double residual = is_plus(u.side) ? volume + energy + boundary : volume + energy - boundary;
  const double scale = std::max(1.0, volume_abs + std::abs(energy));
  return std::abs(residual) / scale;
}

double jump_pairing(const GridGeometry& g, const ExtendedField& v_plus,
                    const ExtendedField& v_minus, const IntervalFn& zeta) {
  double sum = 0.0;
  for (int id = 0; id < g.num_cuts(); ++id) {
    const double jump = cut_difference(g, v_plus, id) - cut_difference(g, v_minus, id);
    sum += jump * zeta[id] * g.cuts()[id].chi_jump() / g.h();
  }
  return -sum * g.cell_volume();
}

double mass(const GridGeometry& g, const ExtendedField& u) {
  const auto& points = is_plus(u.side) ? g.plus_points() : g.minus_points();
  double sum = 0.0;
  for (int p : points) sum += u.values[p] * u.values[p];
  return sum * g.cell_volume();
}

}  // namespace gridbie
