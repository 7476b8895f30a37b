#include "gridbie/driver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridbie/errors.hpp"

namespace gridbie {

Method parse_method(const std::string& name) {
  if (name == "fixed_point") return Method::fixed_point;
  if (name == "gmres") return Method::gmres;
  if (name == "dense_direct") return Method::dense_direct;
  throw ConfigError("unknown method '" + name + "' (expected fixed_point, gmres or dense_direct)");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::fixed_point: return "fixed_point";
    case Method::gmres: return "gmres";
    case Method::dense_direct: return "dense_direct";
  }
  return "?";
}

void SolveConfig::validate() const {
  if (!(fp_tol > 0.0) || !(cg_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (fp_tol < 10.0 * cg_tol)
    throw ConfigError("fp_tol must be at least 10 * cg_tol (inner solves set the noise floor)");
  if (fp_max_iters < 1) throw ConfigError("fp_max_iters must be positive");
  if (gmres_restart < 1) throw ConfigError("gmres_restart must be positive");
  if (!(delta > 0.0 && delta <= 0.5)) throw ConfigError("delta must lie in (0, 1/2]");
}

namespace {

double max_abs_diff(const CrossingFn& a, const CrossingFn& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

[[noreturn]] void fail(const char* what, const SolveConfig& config, int evals, double res,
                       const std::vector<double>& history) {
  std::ostringstream msg;
  msg << what << " did not reach " << config.fp_tol << " in " << config.fp_max_iters
      << " evaluations (last residual " << res << ")";
  throw SolverError(msg.str(), evals, res, history);
}

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
void run_gmres(const LayerOperators& ops, const CrossingFn& f, const SolveConfig& config,
               SolveReport& rep) {
  const int n = static_cast<int>(f.size());
  Eigen::Map<const Eigen::VectorXd> b(f.values.data(), n);
  Eigen::VectorXd x = b;
  InterfaceSolution sol;
  int evals = 0;

  auto apply = [&](const Eigen::VectorXd& v) {
    CrossingFn in(std::vector<double>(v.data(), v.data() + n));
    CrossingFn out = ops.apply_Ah(in, &sol);
    rep.cg_iterations += sol.stats.iterations;
    ++evals;
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(out.values.data(), n));
  };

  for (;;) {
    const Eigen::VectorXd ax = apply(x);
    const Eigen::VectorXd r = b - ax;
    const double res_inf = r.lpNorm<Eigen::Infinity>();
    if (res_inf <= config.fp_tol) {
      rep.density = CrossingFn(std::vector<double>(x.data(), x.data() + n));
      rep.boundary_values = CrossingFn(std::vector<double>(ax.data(), ax.data() + n));
      rep.solution = std::move(sol.plus);
      rep.final_residual = res_inf;
      break;
    }
    if (evals >= config.fp_max_iters) fail("gmres", config, evals, res_inf, rep.residual_history);

    const int m = std::min({config.gmres_restart, config.fp_max_iters - evals, n});
    Eigen::MatrixXd v(n, m + 1);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd gvec = Eigen::VectorXd::Zero(m + 1);
    std::vector<double> cs(m), sn(m);
    const double beta = r.norm();
    v.col(0) = r / beta;
    gvec[0] = beta;
    int k = 0;
    while (k < m) {
      Eigen::VectorXd w = apply(v.col(k));
      for (int j = 0; j <= k; ++j) {
        hess(j, k) = v.col(j).dot(w);
        w -= hess(j, k) * v.col(j);
      }
      hess(k + 1, k) = w.norm();
      const bool breakdown = !(hess(k + 1, k) > 1e-14 * beta);
      if (!breakdown) v.col(k + 1) = w / hess(k + 1, k);
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * hess(j, k) + sn[j] * hess(j + 1, k);
        hess(j + 1, k) = -sn[j] * hess(j, k) + cs[j] * hess(j + 1, k);
        hess(j, k) = t;
      }
      const double d = std::hypot(hess(k, k), hess(k + 1, k));
      cs[k] = hess(k, k) / d;
      sn[k] = hess(k + 1, k) / d;
      hess(k, k) = d;
      hess(k + 1, k) = 0.0;
      gvec[k + 1] = -sn[k] * gvec[k];
      gvec[k] = cs[k] * gvec[k];
      ++k;
      rep.residual_history.push_back(std::abs(gvec[k]));
      // The 2-norm bounds the max norm; the margin absorbs inner-solve noise.
      if (breakdown || std::abs(gvec[k]) <= 0.5 * config.fp_tol) break;
    }
    const Eigen::VectorXd y =
        hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(gvec.head(k));
    x += v.leftCols(k) * y;
  }
  rep.evaluations = evals;
}

}  // namespace

SolveReport solve_dirichlet(const LayerOperators& ops, const CrossingFn& f,
                            const SolveConfig& config) {
  config.validate();
  const auto& g = ops.geometry();
  if (static_cast<int>(f.size()) != g.num_crossings())
    throw ConfigError("boundary data has the wrong size");
  for (double v : f.values)
    if (!std::isfinite(v)) throw ConfigError("boundary data is not finite");

  SolveReport rep;
  rep.method = config.method;

  if (config.method == Method::dense_direct) {
    const Eigen::MatrixXd a = ops.assemble_dense(OperatorTag::Ah, config.dense_cap);
    Eigen::Map<const Eigen::VectorXd> rhs(f.values.data(), f.size());
    const Eigen::VectorXd phi = a.partialPivLu().solve(rhs);
    rep.density = CrossingFn(std::vector<double>(phi.data(), phi.data() + phi.size()));
    InterfaceSolution sol;
    rep.boundary_values = ops.apply_Ah(rep.density, &sol);
    rep.solution = std::move(sol.plus);
    rep.cg_iterations = sol.stats.iterations;
    rep.evaluations = 1;
    rep.final_residual = max_abs_diff(f, rep.boundary_values);
    rep.residual_history.push_back(rep.final_residual);
    return rep;
  }

  if (config.method == Method::gmres) {
    run_gmres(ops, f, config, rep);
    rep.contraction = measure_contraction(rep);
    return rep;
  }

  // Richardson iteration phi <- phi + (f - Ah phi), starting from phi = f.
  CrossingFn phi = f;
  InterfaceSolution sol;
  std::vector<double> warm;
  for (int k = 0;; ++k) {
    auto a_phi = ops.apply_Ah(phi, &sol, warm.empty() ? nullptr : &warm);
    rep.cg_iterations += sol.stats.iterations;
    warm = sol.grid;
    const double res = max_abs_diff(f, a_phi);
    rep.residual_history.push_back(res);
    if (res <= config.fp_tol) {
      rep.density = std::move(phi);
      rep.boundary_values = std::move(a_phi);
      rep.solution = std::move(sol.plus);
      rep.final_residual = res;
      break;
    }
    if (k + 1 >= config.fp_max_iters)
      fail("fixed-point iteration", config, k + 1, res, rep.residual_history);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += f[i] - a_phi[i];
  }
  rep.evaluations = static_cast<int>(rep.residual_history.size());
  for (std::size_t k = 3; k < rep.residual_history.size(); ++k)
    if (rep.residual_history[k] > rep.residual_history[k - 1]) rep.monotone = false;
  rep.contraction = measure_contraction(rep);
  return rep;
}

std::optional<double> measure_contraction(const SolveReport& report) {
  const auto& h = report.residual_history;
  if (h.size() < 6) return std::nullopt;
  const double last = h.back(), earlier = h[h.size() - 6];
  if (!(earlier > 0.0) || !(last > 0.0)) return std::nullopt;
  return std::pow(last / earlier, 1.0 / 5.0);
}

CrossingFn sample_on_crossings(const GridGeometry& g, const ScalarFunction& f) {
  CrossingFn out(g.num_crossings());
  for (int c = 0; c < g.num_crossings(); ++c) out[c] = f(g.crossings()[c].x);
  return out;
}

NodeErrors node_errors(const GridGeometry& g, const std::vector<double>& values,
                       const ScalarFunction& exact) {
  NodeErrors e;
  double sum = 0.0;
  for (int p : g.plus_points()) {
    const double d = std::abs(values[p] - exact(g.coords(p)));
    e.max = std::max(e.max, d);
    sum += d * d;
  }
  e.l2 = std::sqrt(sum * g.cell_volume());
  return e;
}

}  // namespace gridbie
