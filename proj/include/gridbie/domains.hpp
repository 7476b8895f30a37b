#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace gridbie {

/// A point in R^2 or R^3; the third coordinate is zero in 2D.
using Point = std::array<double, 3>;

using ScalarFunction = std::function<double(const Point&)>;

/// Smooth domain given by a level set: negative strictly inside (the interior
/// region), positive outside, zero on the boundary curve or surface. The grid
/// box is [-half_width, half_width]^dim.
struct ImplicitDomain {
  std::string name;
  int dim = 2;
  double half_width = 1.0;
  ScalarFunction level_set;

  double operator()(const Point& x) const { return level_set(x); }
};

/// A harmonic function used as a manufactured exact solution.
struct HarmonicFunction {
  std::string name;
  ScalarFunction value;
  /// Singular point, if any; it must lie strictly outside the interior region.
  std::vector<Point> singularities;

  double operator()(const Point& x) const { return value(x); }
};

namespace domains {
ImplicitDomain circle(double radius, double half_width = 1.0);
ImplicitDomain ellipse(double semi_x, double semi_y, double half_width = 1.0);
/// Star r(theta) = a + b cos(k theta), level set |x| - r(theta).
ImplicitDomain star(double a = 0.7, double b = 0.15, int k = 5, double half_width = 1.0);
ImplicitDomain sphere(double radius, double half_width = 1.0);
ImplicitDomain ellipsoid(double a, double b, double c, double half_width = 1.0);
}  // namespace domains

namespace harmonic {
/// Re((z - z0)^m); m may be negative.
HarmonicFunction re_power(int m, double x0 = 0.0, double y0 = 0.0);
/// Im((z - z0)^m); m may be negative.
HarmonicFunction im_power(int m, double x0 = 0.0, double y0 = 0.0);
/// log|z - z0|
HarmonicFunction log_abs(double x0, double y0);
/// 1 / |x - x0| in 3D.
HarmonicFunction inverse_distance(const Point& x0);
/// x^2 - y^2
HarmonicFunction saddle();
/// sin(x) cosh(y)
HarmonicFunction sin_cosh();
/// 2z^2 - x^2 - y^2 (3D).
HarmonicFunction zonal();
/// xyz (3D).
HarmonicFunction xyz();
HarmonicFunction constant(double c);
/// Linear function a.x + c.
HarmonicFunction linear(const Point& a, double c = 0.0);
}  // namespace harmonic

}  // namespace gridbie
