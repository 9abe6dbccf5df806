#pragma once

#include <Eigen/Dense>
#include <utility>

#include "aglercert/errors.hpp"

// Dense Hermitian eigendecomposition.  Inputs are symmetrized first; the
// reconstruction V diag(w) V* agrees with the input to 1e-10 * ||M||.

namespace aglercert {

struct HermitianEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // unitary, columns matched to values
};

inline HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols()) throw Error("hermitian_eigen: matrix not square");
  Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw Error("hermitian_eigen: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Clip negative eigenvalues to zero; returns the PSD projection and the most
// negative eigenvalue seen.
inline std::pair<Eigen::MatrixXcd, double> psd_project(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0) return {M, 0.0};
  auto [w, V] = hermitian_eigen(M);
  double defect = w.size() ? std::min(0.0, w.minCoeff()) : 0.0;
  Eigen::VectorXd wc = w.cwiseMax(0.0);
  Eigen::MatrixXcd P = V * wc.asDiagonal() * V.adjoint();
  P = 0.5 * (P + P.adjoint());
  return {P, defect};
}

}  // namespace aglercert
