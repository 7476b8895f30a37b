#include <Eigen/Eigenvalues>

#include "gridbie/errors.hpp"
#include "gridbie/operators.hpp"

namespace gridbie {

Spectrum spectrum_from(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& calB) {
  Spectrum s;
  s.gram = gram;
  s.calB_matrix = calB;
  const Eigen::MatrixXd gb = gram * calB;
  const double scale = gb.norm();
  s.self_adjoint_defect = scale > 0.0 ? (gb - gb.transpose()).norm() / scale : 0.0;

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw OperatorError("Gram matrix of the single-layer inner product is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  // C = L^T B L^{-T}; symmetric when G B is.
  const Eigen::MatrixXd x_t = l.triangularView<Eigen::Lower>().solve(calB.transpose());
  Eigen::MatrixXd c = l.transpose() * x_t.transpose();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw OperatorError("symmetric eigensolver failed");
  const auto& ev = eig.eigenvalues();
  s.calB.assign(ev.data(), ev.data() + ev.size());
  for (double v : s.calB) s.calA.push_back(1.0 + v);
  s.r_hat = s.calB.empty() ? 0.0 : -s.calB.front();
  return s;
}

Spectrum spectrum(const LayerOperators& ops, int cap) {
  return spectrum_from(ops.assemble_gram(cap), ops.assemble_dense(OperatorTag::calB, cap));
}

Eigen::VectorXcd general_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(m, false);
  if (eig.info() != Eigen::Success) throw OperatorError("general eigensolver failed");
  return eig.eigenvalues();
}

}  // namespace gridbie
