#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qtst {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Kronecker product; result dims are (ra*rb, ca*cb).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Largest absolute entry of (a - b).
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) < tol;
}

inline ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

}  // namespace qtst
