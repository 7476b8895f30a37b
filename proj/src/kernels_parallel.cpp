#include <omp.h>
#include <algorithm>

#include <vector>

#include "gridbie/kernels.hpp"

namespace gridbie::kernels {

void set_thread_count(int threads) { omp_set_num_threads(threads < 1 ? 1 : threads); }

int thread_count() { return omp_get_max_threads(); }

namespace parallel {

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const int rows = a.rows;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.values[k] * x[a.col_idx[k]];
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<long>(x.size());
  const auto block = static_cast<long>(kReductionBlock);
  const long blocks = (n + block - 1) / block;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    double s = 0.0;
    const long end = std::min(n, (b + 1) * block);
    for (long i = b * block; i < end; ++i) s += x[i] * y[i];
    partial[b] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

}  // namespace parallel
}  // namespace gridbie::kernels
