#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "gridbie/errors.hpp"
#include "gridbie/geometry.hpp"
#include "support.hpp"

using namespace gridbie;
using gridbie::testing::cut_at;
using gridbie::testing::point_at;

TEST_CASE("classification of the circle") {
  const auto g = GridGeometry::build(domains::circle(0.7), 8);
  CHECK(g.in_plus(point_at(g, 0.0, 0.0)));
  CHECK_FALSE(g.in_plus(point_at(g, 1.0, 1.0)));
  CHECK(g.on_box_boundary(point_at(g, 1.0, 1.0)));
}

TEST_CASE("point counts and area of the plus side") {
  const int n = 64;
  const auto g = GridGeometry::build(domains::circle(0.7), n);
  int box = 0;
  for (int p = 0; p < g.num_points(); ++p) box += g.on_box_boundary(p);
  CHECK(g.plus_points().size() + g.minus_points().size() + box == (n + 1) * (n + 1));
  const double area = g.plus_points().size() * g.cell_volume();
  CHECK(std::abs(area - std::numbers::pi * 0.49) <= 0.05 * std::numbers::pi * 0.49);
}

TEST_CASE("exact zeros of the level set are on the minus side") {
  const auto g = GridGeometry::build(domains::circle(0.5), 8);
  CHECK_FALSE(g.in_plus(point_at(g, 0.5, 0.0)));
  CHECK(g.in_plus(point_at(g, 0.25, 0.0)));
}

TEST_CASE("crossing of the circle on the x axis") {
  const int n = 64;
  const auto g = GridGeometry::build(domains::circle(0.7), n);
  const int lower = point_at(g, 0.6875, 0.0);
  const auto& c = g.cuts()[cut_at(g, lower, 0)];
  CHECK(c.lower_plus);
  CHECK(std::abs(0.6875 + c.s_cross * g.h() - 0.7) <= 1e-12);
  CHECK(g.cut_on_edge(point_at(g, 0.0, 0.0), 0) == -1);
}

TEST_CASE("crossings of the ellipse on the x axis") {
  const auto g = GridGeometry::build(domains::ellipse(0.7, 0.5), 64);
  const auto& right = g.cuts()[cut_at(g, point_at(g, 0.6875, 0.0), 0)];
  const auto& left = g.cuts()[cut_at(g, point_at(g, -0.71875, 0.0), 0)];
  CHECK(std::abs(0.6875 + right.s_cross * g.h() - 0.7) <= 1e-12);
  CHECK_FALSE(left.lower_plus);
  CHECK(std::abs(-0.71875 + left.s_cross * g.h() + 0.7) <= 1e-12);
}

TEST_CASE("crossing points of isolated intervals are the crossings") {
  const auto g = GridGeometry::build(domains::circle(0.7), 64);
  CHECK(g.shared_crossings().empty());
  CHECK(g.num_crossings() == g.num_cuts());
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    const auto& x = g.crossings()[c.crossing];
    REQUIRE(x.intervals.size() == 1);
    CHECK(x.intervals[0] == id);
    CHECK_FALSE(x.grid_node.has_value());
    auto expected = g.coords(c.lower);
    expected[c.axis] += c.s_cross * g.h();
    for (int a = 0; a < 2; ++a) CHECK(x.x[a] == doctest::Approx(expected[a]).epsilon(1e-14));
  }
}

TEST_CASE("a boundary through a grid point makes a shared crossing") {
  // 0.375^2 + 0.5^2 = 0.625^2, and both coordinates lie on the n = 16 grid.
  const auto g = GridGeometry::build(domains::circle(0.625), 16);
  const int node = point_at(g, 0.375, 0.5);
  CHECK_FALSE(g.in_plus(node));
  bool found = false;
  for (int x : g.shared_crossings()) {
    const auto& cp = g.crossings()[x];
    REQUIRE(cp.grid_node.has_value());
    for (int id : cp.intervals) CHECK(g.cuts()[id].minus_end() == *cp.grid_node);
    if (*cp.grid_node == node) {
      found = true;
      CHECK(cp.intervals.size() == 2);
    }
  }
  CHECK(found);
}

TEST_CASE("delta-separated points and weights") {
  // Radii put the crossing on the interval [0.5, 0.625] (or its mirror) of the
  // n = 16 grid at a chosen fraction of h.
  const double h = 0.125;
  SUBCASE("no clamping") {
    const auto g = GridGeometry::build(domains::circle(0.5 + 0.5 * h), 16);
    const auto& c = g.cuts()[cut_at(g, point_at(g, 0.5, 0.0), 0)];
    CHECK(c.lower_plus);
    CHECK(c.s1 == doctest::Approx(0.5));
    CHECK(c.xi == doctest::Approx(0.5));
  }
  SUBCASE("clamped near the plus endpoint") {
    const auto g = GridGeometry::build(domains::circle(0.5 + 0.03 * h), 16);
    const auto& c = g.cuts()[cut_at(g, point_at(g, 0.5, 0.0), 0)];
    CHECK(c.s_cross == doctest::Approx(0.03));
    CHECK(c.s1 == 0.1);
    CHECK(c.xi == doctest::Approx(0.1));
  }
  SUBCASE("clamped with the lower endpoint outside") {
    const auto g = GridGeometry::build(domains::circle(0.625 - 0.97 * h), 16);
    const auto& c = g.cuts()[cut_at(g, point_at(g, -0.625, 0.0), 0)];
    CHECK_FALSE(c.lower_plus);
    CHECK(c.s_cross == doctest::Approx(0.97));
    CHECK(c.s1 == doctest::Approx(0.9));
    CHECK(c.xi == doctest::Approx(0.1));
  }
  CHECK(delta_separated_fraction(0.5, 0.1) == 0.5);
  CHECK(delta_separated_fraction(0.03, 0.1) == 0.1);
  CHECK(delta_separated_fraction(0.97, 0.1) == 0.9);
  CHECK(interval_weight(0.9, false) == doctest::Approx(0.1));
  CHECK(interval_weight(0.3, true) == doctest::Approx(0.3));
}

TEST_CASE("with_delta keeps crossings and moves only the separated points") {
  const auto g = GridGeometry::build(domains::star(), 32);
  const auto g3 = g.with_delta(0.3);
  REQUIRE(g3.num_cuts() == g.num_cuts());
  for (int id = 0; id < g.num_cuts(); ++id) {
    CHECK(g3.cuts()[id].s_cross == g.cuts()[id].s_cross);
    CHECK(g3.cuts()[id].s1 >= 0.3 - 1e-15);
    CHECK(g3.cuts()[id].s1 <= 0.7 + 1e-15);
  }
}

TEST_CASE("structural invariants on several geometries") {
  for (const auto& dom : {domains::circle(0.7), domains::ellipse(0.7, 0.5), domains::star()}) {
    int previous = 0;
    for (int n : {16, 32, 64}) {
      for (double delta : {0.1, 0.25, 0.5}) {
        CAPTURE(dom.name);
        CAPTURE(n);
        CAPTURE(delta);
        const auto g = GridGeometry::build(dom, n, delta);
        std::set<int> owned;
        for (int id = 0; id < g.num_cuts(); ++id) {
          const auto& c = g.cuts()[id];
          CHECK(g.in_plus(c.plus_end()));
          CHECK_FALSE(g.in_plus(c.minus_end()));
          CHECK(g.cut_on_edge(c.lower, c.axis) == id);
          CHECK(c.s_cross >= 0.0);
          CHECK(c.s_cross <= 1.0);
          CHECK(c.s1 >= delta - 1e-15);
          CHECK(c.s1 <= 1.0 - delta + 1e-15);
          CHECK(c.xi >= delta - 1e-15);
          CHECK(c.xi <= 1.0 - delta + 1e-15);
          CHECK(c.xi == doctest::Approx(interval_weight(c.s1, c.lower_plus)));
          owned.insert(id);
        }
        int listed = 0;
        for (const auto& x : g.crossings()) listed += static_cast<int>(x.intervals.size());
        CHECK(listed == g.num_cuts());
        CHECK(owned.size() == static_cast<std::size_t>(g.num_cuts()));
        for (int p : g.plus_points()) CHECK_FALSE(g.on_box_boundary(p));
        if (delta == 0.1 && previous > 0) {
          const double ratio = static_cast<double>(g.num_cuts()) / previous;
          CHECK(ratio >= 1.5);
          CHECK(ratio <= 2.5);
        }
        if (delta == 0.1) previous = g.num_cuts();
      }
    }
  }
}

TEST_CASE("three-dimensional geometry") {
  const auto g = GridGeometry::build(domains::sphere(0.6), 16);
  CHECK(g.dim() == 3);
  CHECK(g.num_points() == 17 * 17 * 17);
  CHECK(g.in_plus(point_at(g, 0.0, 0.0, 0.0)));
  for (const auto& c : g.cuts()) CHECK(g.in_plus(c.plus_end()));
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(GridGeometry::build(domains::circle(0.7), 4), ConfigError);
  CHECK_THROWS_AS(GridGeometry::build(domains::circle(0.7), 32, 0.0), ConfigError);
  CHECK_THROWS_AS(GridGeometry::build(domains::circle(0.7), 32, 0.6), ConfigError);
  CHECK_THROWS_AS(GridGeometry::build(domains::circle(0.99), 16), GeometryError);
  // A small circle between two grid points: the interval crosses it twice.
  const ImplicitDomain bubble{"bubble", 2, 1.0, [](const Point& x) {
                                return (x[0] - 0.0625) * (x[0] - 0.0625) + x[1] * x[1] - 0.03 * 0.03;
                              }};
  CHECK_THROWS_AS(GridGeometry::build(bubble, 16), GeometryError);
  const ImplicitDomain broken{"nan", 2, 1.0, [](const Point&) { return std::nan(""); }};
  CHECK_THROWS_AS(GridGeometry::build(broken, 16), GeometryError);
}
