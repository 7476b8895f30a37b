#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridbie/operators.hpp"

namespace gridbie {

enum class Method { fixed_point, gmres, dense_direct };

Method parse_method(const std::string& name);
const char* to_string(Method m);

struct SolveConfig {
  Method method = Method::gmres;
  /// Max-norm tolerance on f - Ah(phi).
  double fp_tol = 1e-10;
  /// Cap on Ah evaluations for the iterative methods.
  int fp_max_iters = 200;
  /// Krylov dimension before a gmres restart.
  int gmres_restart = 120;
  double cg_tol = kDefaultCgTol;
  double delta = kDefaultDelta;
  int n = 64;
  int dense_cap = kDefaultDenseCap;

  /// Throws ConfigError for non-positive tolerances or fp_tol < 10 cg_tol.
  void validate() const;
};

struct SolveReport {
  Method method = Method::fixed_point;
  /// Density at the crossing points.
  CrossingFn density;
  /// Plus half of the final double layer; its grid values are the solution.
  ExtendedField solution;
  /// Ah(density) from the final evaluation.
  CrossingFn boundary_values;
  /// fixed_point: ||f - Ah(phi_k)||_inf per evaluation. gmres: the
  /// least-squares residual estimate (2-norm) per Krylov step.
  std::vector<double> residual_history;
  /// ||f - Ah(phi)||_inf for the returned density.
  double final_residual = 0.0;
  std::optional<double> contraction;
  int evaluations = 0;
  long cg_iterations = 0;
  /// False when the residual grew after the third evaluation.
  bool monotone = true;
};

/// Solves Ah(phi) = f and returns the plus-side solution. Throws SolverError
/// carrying the residual history when the iteration does not converge.
SolveReport solve_dirichlet(const LayerOperators& ops, const CrossingFn& f,
                            const SolveConfig& config);

/// Geometric mean of the last five residual ratios; empty when fewer than six
/// residuals were recorded.
std::optional<double> measure_contraction(const SolveReport& report);

/// Restriction of a function to the crossing points.
CrossingFn sample_on_crossings(const GridGeometry& g, const ScalarFunction& f);

struct NodeErrors {
  double max = 0.0;
  /// sqrt(sum e^2 h^d) over the plus-side grid points.
  double l2 = 0.0;
};

NodeErrors node_errors(const GridGeometry& g, const std::vector<double>& values,
                       const ScalarFunction& exact);

}  // namespace gridbie
