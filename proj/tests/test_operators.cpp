#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "gridbie/driver.hpp"
#include "gridbie/errors.hpp"
#include "gridbie/operators.hpp"
#include "gridbie/random.hpp"
#include "support.hpp"

using namespace gridbie;
using gridbie::testing::max_abs;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("constant and zero densities") {
  for (const auto& dom : {domains::circle(0.7), domains::star()}) {
    const auto g = GridGeometry::build(dom, 32);
    const LayerOperators ops(g);
    const IntervalFn one(g.num_cuts(), 1.0), zero(g.num_cuts(), 0.0);
    for (double v : ops.apply_calA(one).values) CHECK(std::abs(v - 1.0) <= 10 * kDefaultCgTol);
    for (double v : ops.apply_calB(one).values) CHECK(std::abs(v) <= 10 * kDefaultCgTol);
    CHECK(max_abs(ops.apply_calA(zero).values) == 0.0);
    CHECK(max_abs(ops.apply_calB(zero).values) == 0.0);
    for (double v : ops.apply_Ah(CrossingFn(g.num_crossings(), 1.0)).values)
      CHECK(std::abs(v - 1.0) <= 10 * kDefaultCgTol);
    CHECK(max_abs(ops.apply_Ah(CrossingFn(g.num_crossings(), 0.0)).values) == 0.0);
    CHECK(ops.sl_inner(zero, zero) == 0.0);
    CHECK(ops.norm1(CrossingFn(g.num_crossings(), 0.0)) == 0.0);
    CHECK(ops.norm2(CrossingFn(g.num_crossings(), 0.0)) == 0.0);
  }
}

TEST_CASE("calA minus calB is the identity") {
  const auto g = GridGeometry::build(domains::star(), 32);
  const LayerOperators ops(g);
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto phi = random_interval_fn(g, rng);
    const auto a = ops.apply_calA(phi), b = ops.apply_calB(phi);
    for (int i = 0; i < g.num_cuts(); ++i) CHECK(std::abs(a[i] - phi[i] - b[i]) <= 10 * kDefaultCgTol);
  }
}

TEST_CASE("single-layer inner product") {
  const auto g = GridGeometry::build(domains::circle(0.7), 32);
  const LayerOperators ops(g);
  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    const auto psi = random_interval_fn(g, rng), zeta = random_interval_fn(g, rng);
    const double s = ops.sl_inner(psi, zeta);
    CHECK(std::abs(s - ops.sl_inner(zeta, psi)) <= 1e-10 * std::max(1.0, std::abs(s)));
    const double scale = std::max(1.0, ops.sl_norm(psi) * ops.sl_norm(zeta));
    CHECK(std::abs(s - ops.sl_inner_boundary(psi, zeta)) <= 10 * kDefaultCgTol * scale);
    const auto layers = ops.single_layers(psi);
    const double pair = jump_pairing(g, layers.plus, layers.minus, psi);
    CHECK(std::abs(ops.sl_inner(psi, psi) - pair) <= 10 * kDefaultCgTol * scale);
  }
}

TEST_CASE("lifting to and from the crossing points") {
  SUBCASE("no shared crossings: re-indexing") {
    const auto g = GridGeometry::build(domains::circle(0.7), 32);
    REQUIRE(g.shared_crossings().empty());
    Rng rng(1);
    const auto phi = random_crossing_fn(g, rng);
    const auto lifted = tilde_lift(g, phi);
    for (int id = 0; id < g.num_cuts(); ++id) CHECK(lifted[id] == phi[g.cuts()[id].crossing]);
    CHECK(restrict_sharp(g, lifted).values == phi.values);
  }
  SUBCASE("shared crossings carry one value") {
    const auto g = GridGeometry::build(domains::circle(0.625), 16);
    REQUIRE_FALSE(g.shared_crossings().empty());
    const int x = g.shared_crossings().front();
    CrossingFn phi(g.num_crossings(), 0.0);
    phi[x] = 5.0;
    const auto lifted = tilde_lift(g, phi);
    for (int id : g.crossings()[x].intervals) CHECK(lifted[id] == 5.0);
    Rng rng(2);
    const auto r = random_crossing_fn(g, rng);
    CHECK(restrict_sharp(g, tilde_lift(g, r)).values == r.values);
    auto broken = tilde_lift(g, r);
    broken[g.crossings()[x].intervals[0]] += 1.0;
    CHECK_THROWS_AS(restrict_sharp(g, broken), OperatorError);
  }
}

TEST_CASE("quadratic interpolation to the crossing points") {
  auto q = [](const Point& x) { return 1.0 - x[0] + 0.5 * x[0] * x[0] + x[1] * x[1]; };
  for (const auto& dom : {domains::circle(0.7), domains::star(), domains::circle(0.625)}) {
    const auto g = GridGeometry::build(dom, dom.name.find("0.625") != std::string::npos ? 16 : 32);
    auto u = ExtendedField::zeros(g, Side::plus);
    for (int p : g.plus_points()) u.values[p] = q(g.coords(p));
    for (int id = 0; id < g.num_cuts(); ++id) u.ext[id] = q(g.coords(g.cuts()[id].minus_end()));
    const auto f = interp_Q(g, u);
    for (int x = 0; x < g.num_crossings(); ++x)
      CHECK(std::abs(f[x] - q(g.crossings()[x].x)) <= 1e-12);

    const LayerOperators ops(g);
    Rng rng(6);
    const auto data = random_crossing_fn(g, rng);
    CHECK(max_diff(interp_Q(g, ops.extended_sw(data)).values, data.values) <= 1e-10);
  }
}

TEST_CASE("Ah is the interpolated plus half of the double layer") {
  const auto g = GridGeometry::build(domains::star(), 24);
  const LayerOperators ops(g);
  Rng rng(8);
  const auto phi = random_crossing_fn(g, rng);
  InterfaceSolution sol;
  const auto a = ops.apply_Ah(phi, &sol);
  const auto direct = ops.double_layer(tilde_lift(g, phi));
  CHECK(max_diff(a.values, interp_Q(g, direct.plus).values) <= 1e-9);
  CHECK(max_diff(a.values, interp_Q(g, sol.plus).values) <= 1e-14);
}

TEST_CASE("dense assembly") {
  const auto g = GridGeometry::build(domains::circle(0.7), 16);
  const LayerOperators ops(g);
  const auto a = ops.assemble_dense(OperatorTag::calA);
  const auto b = ops.assemble_dense(OperatorTag::calB);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.num_cuts(), g.num_cuts());
  CHECK((a - b - id).cwiseAbs().maxCoeff() <= 10 * kDefaultCgTol);

  IntervalFn e1(g.num_cuts());
  e1[1] = 1.0;
  const auto col = ops.apply_calB(e1);
  for (int i = 0; i < g.num_cuts(); ++i) CHECK(b(i, 1) == col[i]);

  const auto gram = ops.assemble_gram();
  CHECK((gram - gram.transpose()).norm() <= 1e-10 * gram.norm());
  CHECK(gram.llt().info() == Eigen::Success);
  IntervalFn e2(g.num_cuts());
  e2[2] = 1.0;
  CHECK(gram(1, 2) == doctest::Approx(ops.sl_inner(e1, e2)).epsilon(1e-9));
  const Eigen::MatrixXd sum = ops.assemble_energy(Side::plus) + ops.assemble_energy(Side::minus);
  CHECK((sum - gram).cwiseAbs().maxCoeff() <= 1e-14 * gram.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(ops.assemble_dense(OperatorTag::calB, 10), ConfigError);
  CHECK_THROWS_AS(ops.assemble_gram(10), ConfigError);

  OperatorHandle handle(ops, OperatorTag::calB);
  CHECK(handle.dense().isApprox(b, 0.0));
  CHECK(handle.apply(e1.values) == col.values);
}

TEST_CASE("spectral bounds") {
  for (const auto& dom : {domains::circle(0.7), domains::star()}) {
    const auto g = GridGeometry::build(dom, 16);
    const LayerOperators ops(g);
    const auto s = spectrum(ops);
    CHECK(s.self_adjoint_defect <= 1e-8);
    CHECK(s.r_hat < 1.0);
    CHECK(s.calB.front() >= -s.r_hat - 1e-8);
    CHECK(s.calB.back() <= 1e-8);
    CHECK(s.calA.front() >= 1.0 - s.r_hat - 1e-8);
    CHECK(s.calA.back() <= 1.0 + 1e-8);

    // The same eigenvalues from a general eigensolve of the dense calB.
    const auto general = general_eigenvalues(s.calB_matrix);
    double lo = 1e300, hi = -1e300, im = 0.0;
    for (int i = 0; i < general.size(); ++i) {
      lo = std::min(lo, general[i].real());
      hi = std::max(hi, general[i].real());
      im = std::max(im, std::abs(general[i].imag()));
    }
    CHECK(im <= 1e-8);
    CHECK(lo == doctest::Approx(s.calB.front()).epsilon(1e-8));
    CHECK(hi == doctest::Approx(s.calB.back()).epsilon(1e-6).scale(1.0));

    const auto ah = general_eigenvalues(ops.assemble_dense(OperatorTag::Ah));
    for (int i = 0; i < ah.size(); ++i) {
      CHECK(std::abs(ah[i].imag()) <= 1e-8);
      CHECK(ah[i].real() > 0.0);
      CHECK(ah[i].real() <= 1.0 + 1e-8);
    }

    Rng rng(12);
    for (int k = 0; k < 5; ++k) {
      const auto phi = random_interval_fn(g, rng);
      CHECK(ops.sl_norm(ops.apply_calB(phi)) <= s.r_hat * ops.sl_norm(phi) * (1.0 + 1e-6));
      const auto f = random_crossing_fn(g, rng);
      CHECK(ops.norm2(ops.apply_Ah(f)) <= 2.0 * ops.norm1(f) + 10 * kDefaultCgTol);
    }
  }
}
