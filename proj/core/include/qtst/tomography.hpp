#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qtst/protocol.hpp"

namespace qtst {

enum class PauliBasis { X, Y, Z };
std::string to_string(PauliBasis basis);

/// Measurement outcomes of a basis measurement on the nuclear qutrit:
/// the +1/-1 eigenstates of the basis operator on the {|+1>,|-1>} qubit
/// subspace plus the |0>_N leak outcome.
enum Outcome { kOutcomePlus = 0, kOutcomeMinus = 1, kOutcomeLeak = 2 };

struct MeasurementRecord {
  PauliBasis basis = PauliBasis::Z;
  std::array<long long, 3> counts{};  // indexed by Outcome
  long long shots = 0;                // always the sum of counts

  void validate() const;
};

/// Pauli operator on the qubit subspace: 0 = I, 1 = X, 2 = Y, 3 = Z.
ComplexMatrix pauli(int index);

/// Born-rule probabilities (plus, minus, leak) of a basis measurement.
std::array<double, 3> outcome_probabilities(const DensityOperator& rho_n,
                                            PauliBasis basis);

/// Multinomial sample of `shots` basis measurements; identical seeds give
/// identical records.
MeasurementRecord simulate_counts(const DensityOperator& rho_n,
                                  PauliBasis basis, long long shots,
                                  std::uint64_t seed);

struct QstResult {
  DensityOperator rho;  // physical state on the nuclear qubit subspace
  double leak = 0.0;    // pooled |0>_N frequency
};

/// Linear-inversion state tomography from X, Y, Z records (duplicate-basis
/// records are pooled), projected to the nearest physical state by clipping
/// negative eigenvalues and renormalizing the trace.
QstResult qst(const std::vector<MeasurementRecord>& records);

/// 4x4 process matrix over the operator basis (I, X, Y, Z), normalized so
/// a trace-preserving process has Tr chi = 1.
class ChiMatrix {
 public:
  ChiMatrix();  // identity process: chi_II = 1
  explicit ChiMatrix(ComplexMatrix entries);

  const ComplexMatrix& entries() const { return entries_; }
  double real_at(int m, int n) const { return entries_(m, n).real(); }

 private:
  ComplexMatrix entries_;
};

/// Least-squares process tomography from an over-determined set of
/// photon inputs and nuclear outputs. Outputs on the full qutrit have the
/// |0>_N population removed and the qubit block renormalized before the
/// fit; the fitted chi is projected to Hermitian unit trace. Throws on a
/// rank-deficient input set.
ChiMatrix qpt(const std::vector<PhotonState>& inputs,
              const std::vector<DensityOperator>& outputs);

struct BootstrapResult {
  double estimate = 0.0;
  double stddev = 0.0;
};

/// Parametric bootstrap: resample every record from its empirical
/// multinomial, re-run the estimator, and report the sample standard
/// deviation over `resamples` replicas (at least 100). Deterministic for
/// a given seed.
BootstrapResult bootstrap_errorbar(
    const std::vector<MeasurementRecord>& records,
    const std::function<double(const std::vector<MeasurementRecord>&)>&
        estimator,
    int resamples, std::uint64_t seed);

}  // namespace qtst
