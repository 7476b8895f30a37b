#include "gridbie/random.hpp"

namespace gridbie {

IntervalFn random_interval_fn(const GridGeometry& g, Rng& rng) {
  IntervalFn out(g.num_cuts());
  for (auto& v : out.values) v = rng.symmetric();
  return out;
}

CrossingFn random_crossing_fn(const GridGeometry& g, Rng& rng) {
  CrossingFn out(g.num_crossings());
  for (auto& v : out.values) v = rng.symmetric();
  return out;
}

ExtendedField random_field(const GridGeometry& g, Side side, Rng& rng) {
  auto u = ExtendedField::zeros(g, side);
  for (int p : is_plus(side) ? g.plus_points() : g.minus_points()) u.values[p] = rng.symmetric();
  for (auto& e : u.ext) e = rng.symmetric();
  return u;
}

}  // namespace gridbie
