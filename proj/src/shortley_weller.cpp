#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <string>

#include "gridbie/errors.hpp"
#include "gridbie/solvers.hpp"

namespace gridbie {

struct ShortleyWeller::Impl {
  const GridGeometry* g;
  SwBackend backend;
  CgOptions opts;
  std::vector<int> slot;
  Eigen::SparseMatrix<double> a;
  /// Per row: (crossing, coefficient) pairs moved to the right-hand side.
  std::vector<std::vector<std::pair<int, double>>> boundary;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  kernels::CsrMatrix normal;  // A^T A for the CG backend

  std::vector<double> rhs(const CrossingFn& f) const {
    std::vector<double> b(boundary.size(), 0.0);
    for (std::size_t k = 0; k < boundary.size(); ++k)
      for (auto [cross, coef] : boundary[k]) b[k] += coef * f[cross];
    return b;
  }
};

ShortleyWeller::ShortleyWeller(const GridGeometry& g, SwBackend backend, CgOptions opts)
    : impl_(std::make_unique<Impl>()) {
  auto& m = *impl_;
  m.g = &g;
  m.backend = backend;
  m.opts = opts;
  const auto& pts = g.plus_points();
  const int n = static_cast<int>(pts.size());
  m.slot.assign(g.num_points(), -1);
  for (int k = 0; k < n; ++k) m.slot[pts[k]] = k;
  m.boundary.resize(n);

  // Row k is -h^2 times the three-point second differences summed over axes;
  // an arm cut at distance s uses the quadratic through the boundary value.
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < n; ++k) {
    const int p = pts[k];
    double diag = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      double s[2];
      int cut[2];
      for (int side = 0; side < 2; ++side) {
        const int dir = side == 0 ? -1 : 1;
        cut[side] = g.cut_towards(p, a, dir);
        s[side] = cut[side] >= 0 ? g.cuts()[cut[side]].crossing_from_plus() : 1.0;
      }
      for (int side = 0; side < 2; ++side) {
        const int dir = side == 0 ? -1 : 1;
        const double coef = 2.0 / ((s[0] + s[1]) * s[side]);
        diag += coef;
        if (cut[side] >= 0)
          m.boundary[k].emplace_back(g.cuts()[cut[side]].crossing, coef);
        else
          trip.emplace_back(k, m.slot[g.neighbor(p, a, dir)], -coef);
      }
    }
    trip.emplace_back(k, k, diag);
  }
  m.a.resize(n, n);
  m.a.setFromTriplets(trip.begin(), trip.end());
  m.a.makeCompressed();

  if (backend == SwBackend::direct) {
    m.lu.compute(m.a);
    if (m.lu.info() != Eigen::Success)
      throw SolverError("Shortley-Weller factorization failed: " + m.lu.lastErrorMessage(), 0,
                        0.0);
  } else {
    Eigen::SparseMatrix<double, Eigen::RowMajor> ata = m.a.transpose() * m.a;
    ata.makeCompressed();
    m.normal.rows = m.normal.cols = n;
    m.normal.row_ptr.assign(ata.outerIndexPtr(), ata.outerIndexPtr() + n + 1);
    m.normal.col_idx.assign(ata.innerIndexPtr(), ata.innerIndexPtr() + ata.nonZeros());
    m.normal.values.assign(ata.valuePtr(), ata.valuePtr() + ata.nonZeros());
  }
}

ShortleyWeller::~ShortleyWeller() = default;
ShortleyWeller::ShortleyWeller(ShortleyWeller&&) noexcept = default;
ShortleyWeller& ShortleyWeller::operator=(ShortleyWeller&&) noexcept = default;

std::vector<double> ShortleyWeller::solve(const CrossingFn& f) const {
  const auto& m = *impl_;
  const auto& g = *m.g;
  if (static_cast<int>(f.size()) != g.num_crossings())
    throw FieldError("Shortley-Weller: boundary data has the wrong size");
  const auto b = m.rhs(f);
  const int n = static_cast<int>(b.size());
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
  Eigen::VectorXd x;
  if (m.backend == SwBackend::direct) {
    x = m.lu.solve(bv);
    if (m.lu.info() != Eigen::Success) throw SolverError("Shortley-Weller solve failed", 0, 0.0);
  } else {
    const Eigen::VectorXd atb = m.a.transpose() * bv;
    auto r = cg_solve(m.normal, std::span<const double>(atb.data(), n), m.opts);
    x = Eigen::Map<Eigen::VectorXd>(r.x.data(), n);
  }
  std::vector<double> w(g.num_points(), 0.0);
  const auto& pts = g.plus_points();
  for (int k = 0; k < n; ++k) w[pts[k]] = x[k];
  return w;
}

double ShortleyWeller::residual(const std::vector<double>& w, const CrossingFn& f) const {
  const auto& m = *impl_;
  const auto& pts = m.g->plus_points();
  const int n = static_cast<int>(pts.size());
  Eigen::VectorXd x(n);
  for (int k = 0; k < n; ++k) x[k] = w[pts[k]];
  const auto b = m.rhs(f);
  const Eigen::VectorXd ax = m.a * x;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(ax[k] - b[k]));
  return worst;
}

}  // namespace gridbie
