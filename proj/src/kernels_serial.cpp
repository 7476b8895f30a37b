#include "gridbie/kernels.hpp"

#include <algorithm>
#include <cassert>

namespace gridbie::kernels {

double CsrMatrix::diagonal(int row) const {
  for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
    if (col_idx[k] == row) return values[k];
  return 0.0;
}

CsrBuilder::CsrBuilder(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows) {}

void CsrBuilder::add(int row, int col, double value) {
  assert(row >= 0 && row < rows_ && col >= 0 && col < cols_);
  entries_[row].emplace_back(col, value);
}

CsrMatrix CsrBuilder::build() const {
  CsrMatrix m;
  m.rows = rows_;
  m.cols = cols_;
  m.row_ptr.assign(1, 0);
  for (const auto& row : entries_) {
    auto sorted = row;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < sorted.size();) {
      int col = sorted[k].first;
      double sum = 0.0;
      for (; k < sorted.size() && sorted[k].first == col; ++k) sum += sorted[k].second;
      m.col_idx.push_back(col);
      m.values.push_back(sum);
    }
    m.row_ptr.push_back(static_cast<int>(m.values.size()));
  }
  return m;
}

namespace serial {

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.values[k] * x[a.col_idx[k]];
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

}  // namespace serial
}  // namespace gridbie::kernels
