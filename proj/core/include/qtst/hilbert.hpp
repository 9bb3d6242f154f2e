#pragma once

#include <string>
#include <vector>

#include "qtst/linalg.hpp"

namespace qtst {

// Tolerances shared by the state types.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kEigenvalueTol = 1e-10;

struct Subsystem {
  std::string label;
  int dim = 0;
  std::vector<std::string> basis;  // one label per basis index
};

/// Ordered tensor factorization of a Hilbert space. The subsystem order is
/// fixed at construction and defines the index convention for every matrix
/// in this library: the first subsystem is the most significant digit of a
/// mixed-radix composite index.
class HilbertLayout {
 public:
  explicit HilbertLayout(std::vector<Subsystem> subsystems);

  int total_dim() const { return total_dim_; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }

  bool has(const std::string& label) const;
  /// Position of `label` in the subsystem order; throws on unknown label.
  int position_of(const std::string& label) const;

  bool operator==(const HilbertLayout& other) const;

 private:
  std::vector<Subsystem> subsystems_;
  int total_dim_ = 1;
};

/// Normalized ket; sum of |amplitude|^2 is 1 within 1e-12.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  /// Rescales to unit norm before constructing; throws on (near-)zero input.
  static PureState normalized(ComplexVector amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int i) const { return amplitudes_(i); }

  ComplexMatrix projector() const {
    return amplitudes_ * amplitudes_.adjoint();
  }
  Complex overlap(const PureState& other) const;

 private:
  ComplexVector amplitudes_;
};

/// Hermitian, unit-trace, positive matrix on a labeled layout. The three
/// invariants are enforced at construction: hermiticity within 1e-12,
/// unit trace within 1e-12, smallest eigenvalue >= -1e-10. Violations
/// beyond tolerance are hard errors; within tolerance the matrix is kept
/// as-is and can be clipped on demand.
class DensityOperator {
 public:
  DensityOperator(HilbertLayout layout, ComplexMatrix matrix);

  static DensityOperator pure(HilbertLayout layout, const PureState& psi);

  const HilbertLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  int dim() const { return layout_.total_dim(); }

  /// Clips in-tolerance negative eigenvalues to zero and renormalizes.
  DensityOperator clipped() const;

 private:
  HilbertLayout layout_;
  ComplexMatrix matrix_;
};

/// Kraus representation of a completely positive trace-preserving map;
/// sum of K^dag K equals the identity within 1e-12.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus_ops);

  int dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return kraus_ops_; }

 private:
  std::vector<ComplexMatrix> kraus_ops_;
  int dim_ = 0;
};

}  // namespace qtst
