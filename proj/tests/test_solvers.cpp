#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "gridbie/driver.hpp"
#include "gridbie/errors.hpp"
#include "gridbie/random.hpp"
#include "gridbie/solvers.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gridbie;
using gridbie::testing::max_abs;
using gridbie::testing::sample;

namespace {

double saddle(const Point& x) { return x[0] * x[0] - x[1] * x[1]; }

double re_cube(const Point& x) { return x[0] * x[0] * x[0] - 3.0 * x[0] * x[1] * x[1]; }

double plus_error(const GridGeometry& g, const std::vector<double>& values, const ScalarFunction& f) {
  double e = 0.0;
  for (int p : g.plus_points()) e = std::max(e, std::abs(values[p] - f(g.coords(p))));
  return e;
}

kernels::CsrMatrix poisson_1d(int n) {
  kernels::CsrBuilder b(n, n);
  for (int i = 0; i < n; ++i) {
    b.add(i, i, 2.0);
    if (i > 0) b.add(i, i - 1, -1.0);
    if (i + 1 < n) b.add(i, i + 1, -1.0);
  }
  return b.build();
}

}  // namespace

TEST_CASE("conjugate gradients") {
  SUBCASE("identity system") {
    kernels::CsrBuilder b(5, 5);
    for (int i = 0; i < 5; ++i) b.add(i, i, 1.0);
    const std::vector<double> rhs{1, -2, 3, 0.5, 7};
    const auto r = cg_solve(b.build(), rhs, {});
    for (int i = 0; i < 5; ++i) CHECK(r.x[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
  }
  SUBCASE("1D Poisson against a dense solve") {
    const int n = 7;
    const auto a = poisson_1d(n);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = std::sin(1.0 + i);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) dense(i, a.col_idx[k]) = a.values[k];
    const Eigen::VectorXd ref = dense.ldlt().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n));
    const auto r = cg_solve(a, rhs, {});
    for (int i = 0; i < n; ++i) CHECK(std::abs(r.x[i] - ref[i]) <= 1e-10);
  }
  SUBCASE("zero right hand side") {
    const auto r = cg_solve(poisson_1d(10), std::vector<double>(10, 0.0), {});
    CHECK(max_abs(r.x) == 0.0);
  }
  SUBCASE("iteration cap") {
    std::vector<double> rhs(200, 1.0);
    CgOptions opts;
    opts.max_iterations = 3;
    CHECK_THROWS_AS(cg_solve(poisson_1d(200), rhs, opts), SolverError);
  }
}

TEST_CASE("single layer solves") {
  const auto g = GridGeometry::build(domains::star(), 32);
  SUBCASE("constant trace on the plus side") {
    const SingleLayerSolver s(g, Side::plus);
    const auto v = s.solve(IntervalFn(g.num_cuts(), 2.0));
    CHECK(plus_error(g, v.values, [](const Point&) { return 2.0; }) <= 1e-9);
  }
  SUBCASE("harmonic quadratic on the plus side") {
    const SingleLayerSolver s(g, Side::plus);
    // Trace of the sampled polynomial, extension values included.
    const auto v = s.solve(trace(g, sample(g, Side::plus, saddle)));
    CHECK(plus_error(g, v.values, saddle) <= 1e-9);
  }
  SUBCASE("constant trace on the minus side decays to the box") {
    const SingleLayerSolver s(g, Side::minus);
    const auto v = s.solve(IntervalFn(g.num_cuts(), 1.0));
    for (double t : trace(g, v).values) CHECK(std::abs(t - 1.0) <= 1e-9);
    for (int p = 0; p < g.num_points(); ++p)
      if (g.on_box_boundary(p)) CHECK(v.values[p] == 0.0);
    double lo = 1.0;
    for (int p : g.minus_points()) lo = std::min(lo, v.values[p]);
    CHECK(lo < 0.5);
    CHECK(lo > 0.0);
    CHECK(laplacian(g, v).size() == static_cast<std::size_t>(g.num_points()));
    CHECK(max_abs(laplacian(g, v)) * g.h() * g.h() <= 1e-9);
  }
}

TEST_CASE("interface problem") {
  const auto g = GridGeometry::build(domains::circle(0.7), 32);
  const InterfaceSolver s(g);
  SUBCASE("zero density") {
    const auto u = s.solve(IntervalFn(g.num_cuts(), 0.0));
    CHECK(max_abs(u.plus.values) == 0.0);
    CHECK(max_abs(u.minus.values) == 0.0);
  }
  SUBCASE("unit density") {
    const auto u = s.solve(IntervalFn(g.num_cuts(), 1.0));
    CHECK(plus_error(g, u.plus.values, [](const Point&) { return 1.0; }) <= 1e-9);
    for (double e : u.plus.ext) CHECK(std::abs(e - 1.0) <= 1e-9);
    CHECK(max_abs(u.minus.values) <= 1e-9);
    CHECK(max_abs(u.minus.ext) <= 1e-9);
  }
  SUBCASE("jump conditions on random densities") {
    Rng rng(77);
    const auto phi = random_interval_fn(g, rng);
    const auto u = s.solve(phi);
    const auto tp = trace(g, u.plus), tm = trace(g, u.minus);
    for (int id = 0; id < g.num_cuts(); ++id) {
      CHECK(std::abs(tp[id] - tm[id] - phi[id]) <= 1e-12);
      CHECK(std::abs(cut_difference(g, u.plus, id) - cut_difference(g, u.minus, id)) <=
            1e-12 * (1.0 + std::abs(cut_difference(g, u.plus, id))));
    }
    double flux = 0.0;
    for (int id = 0; id < g.num_cuts(); ++id)
      flux += cut_difference(g, u.plus, id) * phi[id] * g.cuts()[id].chi_jump() / g.h();
    flux *= g.cell_volume();
    const double ep = inner(g, u.plus, u.plus), em = inner(g, u.minus, u.minus);
    CHECK(std::abs(ep + em + flux) <= 10.0 * kDefaultCgTol * std::max(1.0, ep + em));
  }
}

TEST_CASE("Shortley-Weller") {
  const auto g = GridGeometry::build(domains::circle(0.7), 32);
  const ShortleyWeller sw(g);
  const auto w1 = sw.solve(CrossingFn(g.num_crossings(), 0.75));
  CHECK(plus_error(g, w1, [](const Point&) { return 0.75; }) <= 1e-12);
  const auto wq = sw.solve(sample_on_crossings(g, saddle));
  CHECK(plus_error(g, wq, saddle) <= 1e-12);
  CHECK(sw.residual(wq, sample_on_crossings(g, saddle)) <= 1e-12);

  const ShortleyWeller cg(g, SwBackend::normal_cg);
  CHECK(plus_error(g, cg.solve(sample_on_crossings(g, saddle)), saddle) <= 1e-7);
}

TEST_CASE("Shortley-Weller error decays at least quadratically") {
  double previous = 0.0;
  for (int n : {32, 64}) {
    const auto g = GridGeometry::build(domains::circle(0.7), n);
    const double e = plus_error(g, ShortleyWeller(g).solve(sample_on_crossings(g, re_cube)), re_cube);
    if (previous > 0.0) CHECK(previous / e >= 3.0);
    previous = e;
  }
}

TEST_CASE("quadratic extrapolation") {
  CHECK(quadratic_through(-1.0, 0.0, 0.0, 0.0, 0.5, 1.0, 1.0) == doctest::Approx(8.0 / 3.0));
  CHECK(quadratic_through(-1.0, 0.0, 0.0, 0.0, 1.0, 8.0 / 3.0, 0.5) == doctest::Approx(1.0));

  auto q = [](const Point& x) { return 0.3 + x[0] - 2.0 * x[1] + x[0] * x[0] - x[1] * x[1]; };
  for (const auto& dom : {domains::circle(0.7), domains::star()}) {
    const auto g = GridGeometry::build(dom, 32);
    std::vector<double> w(g.num_points(), 0.0);
    for (int p : g.plus_points()) w[p] = q(g.coords(p));
    const auto ext = quadratic_extrapolate(g, w, sample_on_crossings(g, q));
    for (int id = 0; id < g.num_cuts(); ++id)
      CHECK(std::abs(ext.ext[id] - q(g.coords(g.cuts()[id].minus_end()))) <= 1e-12);
  }
}
