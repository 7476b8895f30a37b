#pragma once

// Linear-algebra kernels used by the iterative solvers.
//
// Two implementations share one interface: `serial` is the plain reference
// loop kept for testing, `parallel` is the OpenMP version used by the library.
// Parallel reductions are blocked with a fixed block size and the block sums
// are combined in index order, so results do not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace gridbie::kernels {

/// Compressed sparse row matrix.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  double diagonal(int row) const;
};

/// Row-wise builder; entries with equal column inside a row are summed.
class CsrBuilder {
 public:
  CsrBuilder(int rows, int cols);
  void add(int row, int col, double value);
  CsrMatrix build() const;

 private:
  int rows_;
  int cols_;
  std::vector<std::vector<std::pair<int, double>>> entries_;
};

inline constexpr std::size_t kReductionBlock = 4096;

namespace serial {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
}  // namespace serial

namespace parallel {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
}  // namespace parallel

/// Sets the OpenMP thread count used by `parallel` kernels (1 = sequential).
void set_thread_count(int threads);
int thread_count();

}  // namespace gridbie::kernels
