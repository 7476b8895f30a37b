#include <cmath>
#include <string>

#include "gridbie/errors.hpp"
#include "gridbie/solvers.hpp"

namespace gridbie {

namespace kp = kernels::parallel;

CgResult cg_solve(const kernels::CsrMatrix& a, std::span<const double> b, const CgOptions& opts,
                  std::span<const double> x0) {
  const int n = a.rows;
  CgResult result;
  result.x.assign(n, 0.0);
  if (!x0.empty()) result.x.assign(x0.begin(), x0.end());

  const double bnorm = std::sqrt(kp::dot(b, b));
  if (bnorm == 0.0) {
    result.x.assign(n, 0.0);
    return result;
  }
  const int max_it =
      opts.max_iterations > 0 ? opts.max_iterations : 500 * static_cast<int>(std::sqrt(n) + 1);

  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.diagonal(i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  kp::spmv(a, result.x, q);
  for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rnorm = std::sqrt(kp::dot(r, r));
  const double target = opts.tol * bnorm;

  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = kp::dot(r, z);
  int it = 0;
  while (rnorm > target && it < max_it) {
    kp::spmv(a, p, q);
    const double pq = kp::dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    kp::axpy(alpha, p, result.x);
    kp::axpy(-alpha, q, r);
    ++it;
    // Recompute the true residual periodically to limit drift.
    if (it % 50 == 0) {
      kp::spmv(a, result.x, q);
      for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
    }
    rnorm = std::sqrt(kp::dot(r, r));
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = kp::dot(r, z);
    kp::xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  result.stats = {it, rnorm / bnorm};
  if (rnorm > target)
    throw SolverError("conjugate gradients stopped after " + std::to_string(it) +
                          " iterations with relative residual " + std::to_string(rnorm / bnorm),
                      it, rnorm / bnorm);
  return result;
}

CgResult cg_solve(const SparseSystem& system) {
  return cg_solve(system.matrix, system.rhs, system.options);
}

}  // namespace gridbie
