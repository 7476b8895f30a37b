#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gridbie/fields.hpp"
#include "gridbie/kernels.hpp"

namespace gridbie {

inline constexpr double kDefaultCgTol = 1e-11;

struct CgOptions {
  /// Stop when ||b - A x|| <= tol ||b||.
  double tol = kDefaultCgTol;
  /// 0 selects 500 * sqrt(unknowns).
  int max_iterations = 0;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// A symmetric positive (semi)definite system A x = b.
struct SparseSystem {
  kernels::CsrMatrix matrix;
  std::vector<double> rhs;
  CgOptions options;
};

struct CgResult {
  std::vector<double> x;
  SolveStats stats;
};

/// Jacobi-preconditioned conjugate gradients. `x0` is an optional initial
/// guess. Throws SolverError when the iteration cap is reached.
CgResult cg_solve(const kernels::CsrMatrix& a, std::span<const double> b, const CgOptions& opts,
                  std::span<const double> x0 = {});
CgResult cg_solve(const SparseSystem& system);

/// Discrete harmonic function on one side with a prescribed trace on the
/// delta-separated points (and zero on the box boundary for the minus side).
///
/// Extension values are eliminated through the trace relation, which leaves a
/// symmetric positive definite system in the grid values of the side.
class SingleLayerSolver {
 public:
  SingleLayerSolver(const GridGeometry& g, Side side, CgOptions opts = {});

  ExtendedField solve(const IntervalFn& psi, SolveStats* stats = nullptr) const;

  /// System matrix over the side's unknowns. With a zero trace it is the
  /// energy form of the side scaled by h^(2-d).
  const kernels::CsrMatrix& matrix() const { return matrix_; }
  const std::vector<int>& unknowns() const { return unknowns_; }
  Side side() const { return side_; }

 private:
  const GridGeometry* g_;
  Side side_;
  CgOptions opts_;
  std::vector<int> unknowns_;
  std::vector<int> slot_;
  kernels::CsrMatrix matrix_;
};

/// Both halves of the discrete double layer with density phi.
struct InterfaceSolution {
  ExtendedField plus;
  ExtendedField minus;
  /// The single-valued grid function on the whole box.
  std::vector<double> grid;
  SolveStats stats;
};

/// Interface problem: one Poisson solve on the box with a jump-corrected right
/// hand side, then split into the plus and minus fields.
class InterfaceSolver {
 public:
  explicit InterfaceSolver(const GridGeometry& g, CgOptions opts = {});

  /// `warm_start`, when given, is a previous `grid` used as the initial guess.
  InterfaceSolution solve(const IntervalFn& phi,
                          const std::vector<double>* warm_start = nullptr) const;

  const kernels::CsrMatrix& matrix() const { return matrix_; }

 private:
  const GridGeometry* g_;
  CgOptions opts_;
  std::vector<int> unknowns_;
  std::vector<int> slot_;
  kernels::CsrMatrix matrix_;
};

enum class SwBackend {
  /// Sparse LU factorization of the unsymmetric system, computed once.
  direct,
  /// CG on the normal equations.
  normal_cg,
};

/// Shortley-Weller discretization of the Dirichlet problem on the plus side,
/// with boundary values at the crossing points.
class ShortleyWeller {
 public:
  explicit ShortleyWeller(const GridGeometry& g, SwBackend backend = SwBackend::direct,
                          CgOptions opts = {});
  ~ShortleyWeller();
  ShortleyWeller(ShortleyWeller&&) noexcept;
  ShortleyWeller& operator=(ShortleyWeller&&) noexcept;

  /// Grid function equal to the solution on the plus side and zero elsewhere.
  std::vector<double> solve(const CrossingFn& f) const;

  /// Max-norm residual of the Shortley-Weller equations, scaled by h^2.
  double residual(const std::vector<double>& w, const CrossingFn& f) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Extends a Shortley-Weller solution to the minus endpoints of the cut
/// intervals by quadratic extrapolation along each interval's axis.
ExtendedField quadratic_extrapolate(const GridGeometry& g, const std::vector<double>& w,
                                    const CrossingFn& f);

/// Value at `x` of the quadratic through (x0, y0), (x1, y1), (x2, y2).
double quadratic_through(double x0, double y0, double x1, double y1, double x2, double y2,
                         double x);

}  // namespace gridbie
