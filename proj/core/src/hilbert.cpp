#include "qtst/hilbert.hpp"

#include <stdexcept>

namespace qtst {

HilbertLayout::HilbertLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  for (const auto& s : subsystems_) {
    if (s.dim <= 0) {
      throw std::invalid_argument("HilbertLayout: subsystem '" + s.label +
                                  "' has non-positive dimension");
    }
    if (static_cast<int>(s.basis.size()) != s.dim) {
      throw std::invalid_argument("HilbertLayout: subsystem '" + s.label +
                                  "' basis label count does not match dim");
    }
    for (const auto& other : subsystems_) {
      if (&other != &s && other.label == s.label) {
        throw std::invalid_argument("HilbertLayout: duplicate label '" +
                                    s.label + "'");
      }
    }
    total_dim_ *= s.dim;
  }
}

bool HilbertLayout::has(const std::string& label) const {
  for (const auto& s : subsystems_) {
    if (s.label == label) return true;
  }
  return false;
}

int HilbertLayout::position_of(const std::string& label) const {
  for (size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("HilbertLayout: unknown subsystem label '" +
                              label + "'");
}

bool HilbertLayout::operator==(const HilbertLayout& other) const {
  if (subsystems_.size() != other.subsystems_.size()) return false;
  for (size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label != other.subsystems_[i].label ||
        subsystems_[i].dim != other.subsystems_[i].dim ||
        subsystems_[i].basis != other.subsystems_[i].basis) {
      return false;
    }
  }
  return true;
}

PureState::PureState(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw std::invalid_argument("PureState: empty amplitude vector");
  }
  const double norm_err = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (norm_err > kNormTol) {
    throw std::invalid_argument("PureState: amplitudes not normalized");
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < 1e-300) {
    throw std::invalid_argument("PureState::normalized: zero vector");
  }
  return PureState(amplitudes / norm);
}

Complex PureState::overlap(const PureState& other) const {
  if (dim() != other.dim()) {
    throw std::invalid_argument("PureState::overlap: dimension mismatch");
  }
  return amplitudes_.dot(other.amplitudes_);  // <this|other>
}

DensityOperator::DensityOperator(HilbertLayout layout, ComplexMatrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const int d = layout_.total_dim();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("DensityOperator: matrix shape does not match layout dim");
  }
  if (!is_hermitian(matrix_, kHermitianTol)) {
    throw std::invalid_argument("DensityOperator: matrix not Hermitian");
  }
  if (std::abs(matrix_.trace().real() - 1.0) > kTraceTol ||
      std::abs(matrix_.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("DensityOperator: trace not 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_,
                                                      Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kEigenvalueTol) {
    throw std::invalid_argument("DensityOperator: matrix not positive semidefinite");
  }
}

DensityOperator DensityOperator::pure(HilbertLayout layout,
                                      const PureState& psi) {
  if (psi.dim() != layout.total_dim()) {
    throw std::invalid_argument("DensityOperator::pure: state dim does not match layout");
  }
  return DensityOperator(std::move(layout), psi.projector());
}

DensityOperator DensityOperator::clipped() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_);
  Eigen::VectorXd evals = solver.eigenvalues().cwiseMax(0.0);
  evals /= evals.sum();
  ComplexMatrix m = solver.eigenvectors() * evals.cast<Complex>().asDiagonal() *
                    solver.eigenvectors().adjoint();
  // Symmetrize away the eigensolver's rounding before revalidating.
  m = ((m + m.adjoint().eval()) / 2.0).eval();
  return DensityOperator(layout_, std::move(m));
}

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus_ops)
    : kraus_ops_(std::move(kraus_ops)) {
  if (kraus_ops_.empty()) {
    throw std::invalid_argument("QuantumChannel: no Kraus operators");
  }
  dim_ = static_cast<int>(kraus_ops_.front().rows());
  ComplexMatrix completeness = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_ops_) {
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw std::invalid_argument("QuantumChannel: Kraus operators must be square with equal dims");
    }
    completeness += k.adjoint() * k;
  }
  if (max_abs_diff(completeness, identity(dim_)) > kHermitianTol) {
    throw std::invalid_argument("QuantumChannel: not trace preserving (sum K^dag K != I)");
  }
}

}  // namespace qtst
