#include <cmath>

#include "doctest.h"
#include "gridbie/errors.hpp"
#include "gridbie/fields.hpp"
#include "gridbie/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gridbie;
using namespace gridbie::testing;

namespace {

constexpr double kH16 = 0.125;

}  // namespace

TEST_CASE("trace examples") {
  {
    const auto g = GridGeometry::build(domains::circle(0.5 + 0.5 * kH16), 16);
    const int lower = point_at(g, 0.5, 0.0), c = cut_at(g, lower, 0);
    auto u = ExtendedField::zeros(g, Side::plus);
    u.values[lower] = 1.0;
    u.ext[c] = 3.0;
    CHECK(trace(g, u)[c] == doctest::Approx(2.0).epsilon(1e-12));
  }
  {
    const auto g = GridGeometry::build(domains::circle(0.5 + 0.03 * kH16), 16);
    const int lower = point_at(g, 0.5, 0.0), c = cut_at(g, lower, 0);
    auto u = ExtendedField::zeros(g, Side::plus);
    u.ext[c] = 10.0;
    CHECK(trace(g, u)[c] == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto g = GridGeometry::build(domains::star(), 32);
  for (Side side : {Side::plus, Side::minus}) {
    auto u = sample(g, side, [](const Point&) { return -2.5; });
    for (double t : trace(g, u).values) CHECK(t == doctest::Approx(-2.5).epsilon(1e-15));
  }
}

TEST_CASE("lift examples") {
  {
    const auto g = GridGeometry::build(domains::circle(0.5 + 0.5 * kH16), 16);
    const int c = cut_at(g, point_at(g, 0.5, 0.0), 0);
    IntervalFn psi(g.num_cuts());
    psi[c] = 1.0;
    const auto u = lift_from_trace(g, std::vector<double>(g.num_points(), 0.0), psi, Side::plus);
    CHECK(u.ext[c] == doctest::Approx(2.0).epsilon(1e-12));
  }
  {
    const auto g = GridGeometry::build(domains::circle(0.5 + 0.03 * kH16), 16);
    const int lower = point_at(g, 0.5, 0.0), c = cut_at(g, lower, 0);
    std::vector<double> values(g.num_points(), 0.0);
    values[lower] = 1.0;
    IntervalFn psi(g.num_cuts());
    psi[c] = 1.0;
    const auto u = lift_from_trace(g, values, psi, Side::plus);
    CHECK(u.ext[c] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lift and trace round trip") {
  Rng rng(11);
  for (const auto& dom : {domains::circle(0.7), domains::star()}) {
    const auto g = GridGeometry::build(dom, 32);
    for (Side side : {Side::plus, Side::minus}) {
      const auto u = random_field(g, side, rng);
      const auto psi = trace(g, u);
      const auto w = lift_from_trace(g, u.values, psi, side);
      for (int id = 0; id < g.num_cuts(); ++id)
        CHECK(std::abs(w.ext[id] - u.ext[id]) <= 1e-12 * (1.0 + std::abs(u.ext[id])));
      const auto z = random_interval_fn(g, rng);
      const auto back = trace(g, lift_from_trace(g, u.values, z, side));
      for (int id = 0; id < g.num_cuts(); ++id) CHECK(std::abs(back[id] - z[id]) <= 1e-13);
    }
  }
}

TEST_CASE("laplacian examples") {
  const auto g = GridGeometry::build(domains::circle(0.7), 32);
  for (Side side : {Side::plus, Side::minus}) {
    CHECK(max_abs(laplacian(g, sample(g, side, [](const Point&) { return 4.0; }))) == 0.0);
    const auto q = sample(g, side, [](const Point& x) { return x[0] * x[0] - x[1] * x[1]; });
    CHECK(max_abs(laplacian(g, q)) <= 1e-11);
  }
  const int p = point_at(g, 0.0, 0.0);
  auto u = ExtendedField::zeros(g, Side::plus);
  u.values[p] = g.h() * g.h();
  const auto lap = laplacian(g, u);
  CHECK(lap[p] == doctest::Approx(-4.0));
  for (int a = 0; a < 2; ++a)
    for (int dir : {-1, 1}) CHECK(lap[g.neighbor(p, a, dir)] == doctest::Approx(1.0));
}

TEST_CASE("laplacian matches the stencil oracle") {
  Rng rng(5);
  for (const auto& dom : {domains::circle(0.7), domains::star()}) {
    const auto g = GridGeometry::build(dom, 24);
    for (Side side : {Side::plus, Side::minus}) {
      const auto u = random_field(g, side, rng);
      const auto lap = laplacian(g, u), ref = oracle_laplacian(g, u);
      for (int p = 0; p < g.num_points(); ++p)
        CHECK(std::abs(lap[p] - ref[p]) <= 1e-12 * (1.0 + std::abs(ref[p])));
    }
  }
}

TEST_CASE("inner product examples") {
  const auto g = GridGeometry::build(domains::circle(0.7), 32);
  for (Side side : {Side::plus, Side::minus}) {
    const auto zero = ExtendedField::zeros(g, side);
    CHECK(inner(g, zero, zero) == 0.0);
  }
  auto u = ExtendedField::zeros(g, Side::plus);
  u.values[point_at(g, 0.0, 0.0)] = 1.0;
  CHECK(inner(g, u, u) == doctest::Approx(4.0).epsilon(1e-14));

  Rng rng(9);
  for (Side side : {Side::plus, Side::minus}) {
    const auto a = random_field(g, side, rng), b = random_field(g, side, rng);
    CHECK(inner(g, a, b) == inner(g, b, a));
    const double ref = oracle_inner(g, a, b);
    CHECK(std::abs(inner(g, a, b) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
    CHECK(inner(g, a, a) > 0.0);
  }
}

TEST_CASE("Green identities on random fields") {
  Rng rng(2024);
  for (const auto& dom : {domains::circle(0.7), domains::star()}) {
    const auto g = GridGeometry::build(dom, 40);
    for (Side side : {Side::plus, Side::minus}) {
      for (int k = 0; k < 5; ++k) {
        const auto u = random_field(g, side, rng), v = random_field(g, side, rng);
        CHECK(oracle_green(g, u, v) <= 1e-11);
        CHECK(green_residual(g, u, v) <= 1e-11);
      }
      const auto zero = ExtendedField::zeros(g, side);
      CHECK(green_residual(g, zero, zero) == 0.0);
    }
    const auto c = sample(g, Side::plus, [](const Point&) { return 1.5; });
    CHECK(green_residual(g, c, random_field(g, Side::plus, rng)) == 0.0);
  }
}

TEST_CASE("side mismatch is rejected") {
  const auto g = GridGeometry::build(domains::circle(0.7), 16);
  const auto a = ExtendedField::zeros(g, Side::plus), b = ExtendedField::zeros(g, Side::minus);
  CHECK_THROWS_AS(inner(g, a, b), FieldError);
  CHECK_THROWS_AS(green_residual(g, a, b), FieldError);
}
