#include "gridbie/errors.hpp"
#include "gridbie/solvers.hpp"

namespace gridbie {

double quadratic_through(double x0, double y0, double x1, double y1, double x2, double y2,
                         double x) {
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  return y0 * l0 + y1 * l1 + y2 * l2;
}

ExtendedField quadratic_extrapolate(const GridGeometry& g, const std::vector<double>& w,
                                    const CrossingFn& f) {
  if (static_cast<int>(w.size()) != g.num_points() ||
      static_cast<int>(f.size()) != g.num_crossings())
    throw FieldError("quadratic_extrapolate: size mismatch");
  auto u = ExtendedField::zeros(g, Side::plus);
  for (int p : g.plus_points()) u.values[p] = w[p];

  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    const int p = c.plus_end();
    // Local coordinate along the axis, positive towards the minus endpoint.
    const int dir = c.minus_end() == g.neighbor(p, c.axis, 1) ? 1 : -1;
    const double s = c.crossing_from_plus();
    const double fb = f[c.crossing];
    const int other = g.cut_towards(p, c.axis, -dir);
    if (other < 0) {
      const double w_back = w[g.neighbor(p, c.axis, -dir)];
      u.ext[id] = quadratic_through(-1.0, w_back, 0.0, w[p], s, fb, 1.0);
    } else {
      const auto& o = g.cuts()[other];
      u.ext[id] =
          quadratic_through(-o.crossing_from_plus(), f[o.crossing], 0.0, w[p], s, fb, 1.0);
    }
  }
  return u;
}

}  // namespace gridbie
