#pragma once

// Seeded random data for property checks.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the
// standard. Doubles are formed from the top 53 bits by hand rather than with
// std::uniform_real_distribution, whose algorithm is implementation-defined.

#include <cstdint>
#include <random>

#include "gridbie/fields.hpp"

namespace gridbie {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [-1, 1).
  double symmetric() { return -1.0 + 2.0 * unit(); }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Independent uniform [-1, 1) values, one per cut interval.
IntervalFn random_interval_fn(const GridGeometry& g, Rng& rng);

/// Independent uniform [-1, 1) values, one per crossing point.
CrossingFn random_crossing_fn(const GridGeometry& g, Rng& rng);

/// Random grid values on the side and random extension values. Minus-side
/// fields are zero on the box boundary.
ExtendedField random_field(const GridGeometry& g, Side side, Rng& rng);

}  // namespace gridbie
