// Serial reference kernels against their OpenMP counterparts on the box
// Laplacian of the interface solve, plus dense operator assembly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "gridbie/operators.hpp"
#include "gridbie/random.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& body) {
  body();
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) body();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-10s %12.4f %12.4f %9.2fx %12.3g\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int n = 512, reps = 20, dense_n = 32, threads = 0;
  app.add_option("--n", n, "grid intervals per axis for the kernel runs");
  app.add_option("--reps", reps, "repetitions per timing");
  app.add_option("--dense-n", dense_n, "grid for the dense assembly timing (0 skips it)");
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) gridbie::kernels::set_thread_count(threads);

  namespace k = gridbie::kernels;
  const auto g = gridbie::GridGeometry::build(gridbie::domains::circle(0.7), n);
  const gridbie::InterfaceSolver solver(g);
  const auto& a = solver.matrix();
  std::printf("box Laplacian: %d unknowns, %zu nonzeros, %d threads\n\n", a.rows, a.nnz(),
              k::thread_count());

  gridbie::Rng rng(1);
  std::vector<double> x(a.rows), y(a.rows), ys(a.rows), yp(a.rows);
  for (auto& v : x) v = rng.symmetric();
  for (auto& v : y) v = rng.symmetric();

  std::printf("%-10s %12s %12s %10s %12s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "max |diff|");
  auto max_diff = [](const std::vector<double>& p, const std::vector<double>& q) {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
    return m;
  };

  const double s_spmv = time_ms(reps, [&] { k::serial::spmv(a, x, ys); });
  const double p_spmv = time_ms(reps, [&] { k::parallel::spmv(a, x, yp); });
  row("spmv", s_spmv, p_spmv, max_diff(ys, yp));

  double ds = 0.0, dp = 0.0;
  const double s_dot = time_ms(reps, [&] { ds = k::serial::dot(x, y); });
  const double p_dot = time_ms(reps, [&] { dp = k::parallel::dot(x, y); });
  row("dot", s_dot, p_dot, std::abs(ds - dp));

  ys = y;
  yp = y;
  const double s_axpy = time_ms(reps, [&] { k::serial::axpy(1e-3, x, ys); });
  const double p_axpy = time_ms(reps, [&] { k::parallel::axpy(1e-3, x, yp); });
  row("axpy", s_axpy, p_axpy, max_diff(ys, yp));

  ys = y;
  yp = y;
  const double s_xpby = time_ms(reps, [&] { k::serial::xpby(x, 0.5, ys); });
  const double p_xpby = time_ms(reps, [&] { k::parallel::xpby(x, 0.5, yp); });
  row("xpby", s_xpby, p_xpby, max_diff(ys, yp));

  if (dense_n > 0) {
    const auto gd = gridbie::GridGeometry::build(gridbie::domains::circle(0.7), dense_n);
    const gridbie::LayerOperators ops(gd);
    const int saved = k::thread_count();
    k::set_thread_count(1);
    Eigen::MatrixXd m1, mp;
    const double t1 = time_ms(1, [&] { m1 = ops.assemble_dense(gridbie::OperatorTag::calB); });
    k::set_thread_count(saved);
    const double tp = time_ms(1, [&] { mp = ops.assemble_dense(gridbie::OperatorTag::calB); });
    row("dense calB", t1, tp, (m1 - mp).cwiseAbs().maxCoeff());
  }
  return 0;
}
