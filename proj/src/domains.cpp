#include <cmath>
#include <cstdio>
#include <complex>
#include <string>

#include "gridbie/domains.hpp"

namespace gridbie {

namespace {
std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace

namespace domains {

ImplicitDomain circle(double radius, double half_width) {
  const double r2 = radius * radius;
  return {"circle(r=" + fmt_num(radius) + ")", 2, half_width,
          [r2](const Point& x) { return x[0] * x[0] + x[1] * x[1] - r2; }};
}

ImplicitDomain ellipse(double semi_x, double semi_y, double half_width) {
  const double ax = semi_x * semi_x, ay = semi_y * semi_y;
  return {"ellipse(a=" + fmt_num(semi_x) + ",b=" + fmt_num(semi_y) + ")", 2, half_width,
          [ax, ay](const Point& x) { return x[0] * x[0] / ax + x[1] * x[1] / ay - 1.0; }};
}

ImplicitDomain star(double a, double b, int k, double half_width) {
  return {"star(a=" + fmt_num(a) + ",b=" + fmt_num(b) + ",k=" + std::to_string(k) + ")", 2,
          half_width, [a, b, k](const Point& x) {
            const double r = std::hypot(x[0], x[1]);
            const double theta = std::atan2(x[1], x[0]);
            return r - (a + b * std::cos(k * theta));
          }};
}

ImplicitDomain sphere(double radius, double half_width) {
  const double r2 = radius * radius;
  return {"sphere(r=" + fmt_num(radius) + ")", 3, half_width,
          [r2](const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - r2; }};
}

ImplicitDomain ellipsoid(double a, double b, double c, double half_width) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  return {"ellipsoid(a=" + fmt_num(a) + ",b=" + fmt_num(b) + ",c=" + fmt_num(c) + ")", 3,
          half_width, [a2, b2, c2](const Point& x) {
            return x[0] * x[0] / a2 + x[1] * x[1] / b2 + x[2] * x[2] / c2 - 1.0;
          }};
}

}  // namespace domains

namespace harmonic {

namespace {
std::complex<double> zpow(const Point& x, int m, double x0, double y0) {
  const std::complex<double> z(x[0] - x0, x[1] - y0);
  std::complex<double> r(1.0, 0.0);
  const std::complex<double> base = m >= 0 ? z : 1.0 / z;
  for (int i = 0; i < std::abs(m); ++i) r *= base;
  return r;
}

std::vector<Point> pole(int m, double x0, double y0) {
  if (m >= 0) return {};
  return {Point{x0, y0, 0.0}};
}
}  // namespace

HarmonicFunction re_power(int m, double x0, double y0) {
  return {"Re((z-z0)^" + std::to_string(m) + ")",
          [=](const Point& x) { return zpow(x, m, x0, y0).real(); }, pole(m, x0, y0)};
}

HarmonicFunction im_power(int m, double x0, double y0) {
  return {"Im((z-z0)^" + std::to_string(m) + ")",
          [=](const Point& x) { return zpow(x, m, x0, y0).imag(); }, pole(m, x0, y0)};
}

HarmonicFunction log_abs(double x0, double y0) {
  return {"log|z-z0|",
          [=](const Point& x) { return std::log(std::hypot(x[0] - x0, x[1] - y0)); },
          {Point{x0, y0, 0.0}}};
}

HarmonicFunction inverse_distance(const Point& x0) {
  return {"1/|x-x0|",
          [=](const Point& x) {
            const double dx = x[0] - x0[0], dy = x[1] - x0[1], dz = x[2] - x0[2];
            return 1.0 / std::sqrt(dx * dx + dy * dy + dz * dz);
          },
          {x0}};
}

HarmonicFunction saddle() {
  return {"x^2-y^2", [](const Point& x) { return x[0] * x[0] - x[1] * x[1]; }, {}};
}

HarmonicFunction sin_cosh() {
  return {"sin(x)cosh(y)", [](const Point& x) { return std::sin(x[0]) * std::cosh(x[1]); }, {}};
}

HarmonicFunction zonal() {
  return {"2z^2-x^2-y^2",
          [](const Point& x) { return 2.0 * x[2] * x[2] - x[0] * x[0] - x[1] * x[1]; }, {}};
}

HarmonicFunction xyz() {
  return {"xyz", [](const Point& x) { return x[0] * x[1] * x[2]; }, {}};
}

HarmonicFunction constant(double c) {
  return {"const", [c](const Point&) { return c; }, {}};
}

HarmonicFunction linear(const Point& a, double c) {
  return {"linear", [=](const Point& x) { return a[0] * x[0] + a[1] * x[1] + a[2] * x[2] + c; },
          {}};
}

}  // namespace harmonic
}  // namespace gridbie
