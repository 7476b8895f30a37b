#pragma once

// Boundary operators built from the layer solves.
//
//   calA(phi) = trace of the plus half of the double layer with density phi
//   calB(phi) = trace of the minus half; calA - calB = I
//   Ah(phi)   = quadratic interpolation to the crossing points of the plus
//               half, for a density given at the crossing points
//
// The single-layer inner product (psi, zeta) is the sum of the energy inner
// products of the single layers of psi and zeta on both sides.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "gridbie/solvers.hpp"

namespace gridbie {

enum class OperatorTag { calA, calB, Ah, Splus, Sminus };

const char* to_string(OperatorTag tag);

inline constexpr int kDefaultDenseCap = 2000;
/// Relative spread tolerated inside a shared-crossing group.
inline constexpr double kSharpTolerance = 1e-9;

/// Copies each crossing value to every cut interval that shares the crossing.
IntervalFn tilde_lift(const GridGeometry& g, const CrossingFn& phi);

/// Inverse of tilde_lift; throws OperatorError when psi differs inside a group.
CrossingFn restrict_sharp(const GridGeometry& g, const IntervalFn& psi);

/// Quadratic interpolation of a plus-side field to the crossing points. The
/// field must be single-valued at shared crossings.
CrossingFn interp_Q(const GridGeometry& g, const ExtendedField& u);

struct SingleLayerPair {
  ExtendedField plus;
  ExtendedField minus;
};

class LayerOperators {
 public:
  explicit LayerOperators(const GridGeometry& g, CgOptions opts = {},
                          SwBackend sw_backend = SwBackend::direct);

  const GridGeometry& geometry() const { return *g_; }
  const CgOptions& cg_options() const { return opts_; }

  ExtendedField single_layer(const IntervalFn& psi, Side side, SolveStats* stats = nullptr) const;
  SingleLayerPair single_layers(const IntervalFn& psi) const;
  InterfaceSolution double_layer(const IntervalFn& phi,
                                 const std::vector<double>* warm_start = nullptr) const;

  IntervalFn apply_calA(const IntervalFn& phi) const;
  IntervalFn apply_calB(const IntervalFn& phi) const;

  double sl_inner(const IntervalFn& psi, const IntervalFn& zeta) const;
  double sl_norm(const IntervalFn& psi) const;
  /// The same inner product evaluated as a boundary sum of difference jumps.
  double sl_inner_boundary(const IntervalFn& psi, const IntervalFn& zeta) const;

  CrossingFn apply_Ah(const CrossingFn& phi, InterfaceSolution* solution = nullptr,
                      const std::vector<double>* warm_start = nullptr) const;

  const ShortleyWeller& shortley_weller() const { return sw_; }
  /// Shortley-Weller solution extended by quadratic extrapolation.
  ExtendedField extended_sw(const CrossingFn& f) const;

  /// ||phi||_1: single-layer norm of the lifted density.
  double norm1(const CrossingFn& phi) const;
  /// ||f||_2: single-layer norm of the trace of the extended SW solution.
  double norm2(const CrossingFn& f) const;

  /// Generic application; Splus/Sminus return the grid values of the side
  /// (all grid points, zero off the side) followed by the extension values.
  std::vector<double> apply(OperatorTag tag, std::span<const double> x) const;
  int domain_size(OperatorTag tag) const;
  int range_size(OperatorTag tag) const;

  /// Column j = apply(tag, e_j); columns are computed in parallel.
  Eigen::MatrixXd assemble_dense(OperatorTag tag, int cap = kDefaultDenseCap) const;
  /// E_ij = <S e_i, S e_j> on one side.
  Eigen::MatrixXd assemble_energy(Side side, int cap = kDefaultDenseCap) const;
  /// G_ij = (e_i, e_j) in the single-layer inner product.
  Eigen::MatrixXd assemble_gram(int cap = kDefaultDenseCap) const;

 private:
  const GridGeometry* g_;
  CgOptions opts_;
  SingleLayerSolver plus_;
  SingleLayerSolver minus_;
  InterfaceSolver interface_;
  ShortleyWeller sw_;
};

/// Operator bound to a tag, with a lazily cached dense matrix.
class OperatorHandle {
 public:
  OperatorHandle(const LayerOperators& ops, OperatorTag tag) : ops_(&ops), tag_(tag) {}

  OperatorTag tag() const { return tag_; }
  std::vector<double> apply(std::span<const double> x) const { return ops_->apply(tag_, x); }
  const Eigen::MatrixXd& dense(int cap = kDefaultDenseCap) const;

 private:
  const LayerOperators* ops_;
  OperatorTag tag_;
  mutable std::optional<Eigen::MatrixXd> dense_;
};

struct Spectrum {
  /// Eigenvalues of calB, ascending.
  std::vector<double> calB;
  /// Eigenvalues of calA = 1 + eig(calB), ascending.
  std::vector<double> calA;
  /// -min eig(calB).
  double r_hat = 0.0;
  /// ||G B - B^T G|| / ||G B|| (Frobenius).
  double self_adjoint_defect = 0.0;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd calB_matrix;
};

/// Eigenvalues of calB through the Cholesky congruence G = L L^T, i.e. of the
/// symmetric matrix L^T B L^{-T}. Throws OperatorError if G is not SPD.
Spectrum spectrum(const LayerOperators& ops, int cap = kDefaultDenseCap);

/// Spectrum of a dense operator, for instance calB, from its matrix and the Gram matrix.
Spectrum spectrum_from(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& calB);

/// Eigenvalues of a general square matrix (e.g. the dense Ah).
Eigen::VectorXcd general_eigenvalues(const Eigen::MatrixXd& m);

}  // namespace gridbie
