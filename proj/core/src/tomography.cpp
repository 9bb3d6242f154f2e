#include "qtst/tomography.hpp"

#include <algorithm>
#include <cmath>

#include "qtst/rng.hpp"

namespace qtst {
namespace {

// +1/-1 eigenkets of each basis operator on the qubit subspace, embedded
// in the qutrit (|0>_N amplitude zero).
ComplexVector basis_ket(PauliBasis basis, bool plus) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(3);
  switch (basis) {
    case PauliBasis::X:
      v(0) = s;
      v(1) = plus ? s : -s;
      break;
    case PauliBasis::Y:
      v(0) = s;
      v(1) = plus ? Complex(0.0, s) : Complex(0.0, -s);
      break;
    case PauliBasis::Z:
      if (plus) {
        v(0) = 1.0;
      } else {
        v(1) = 1.0;
      }
      break;
  }
  return v;
}

ComplexMatrix qubit_block(const ComplexMatrix& m3) {
  return m3.topLeftCorner(2, 2);
}

// Clip negative eigenvalues to zero and renormalize the trace.
ComplexMatrix project_physical(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      ((m + m.adjoint().eval()) / 2.0).eval());
  Eigen::VectorXd evals = solver.eigenvalues().cwiseMax(0.0);
  const double total = evals.sum();
  if (total <= 0.0) {
    throw std::runtime_error("tomography: reconstructed state has no positive weight");
  }
  evals /= total;
  ComplexMatrix out = solver.eigenvectors() *
                      evals.cast<Complex>().asDiagonal() *
                      solver.eigenvectors().adjoint();
  return ((out + out.adjoint().eval()) / 2.0).eval();
}

}  // namespace

std::string to_string(PauliBasis basis) {
  switch (basis) {
    case PauliBasis::X: return "X";
    case PauliBasis::Y: return "Y";
    case PauliBasis::Z: return "Z";
  }
  return "?";
}

void MeasurementRecord::validate() const {
  long long total = 0;
  for (long long c : counts) {
    if (c < 0) throw std::invalid_argument("MeasurementRecord: negative count");
    total += c;
  }
  if (total != shots) {
    throw std::invalid_argument("MeasurementRecord: counts do not sum to shots");
  }
}

ComplexMatrix pauli(int index) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (index) {
    case 0: m(0, 0) = m(1, 1) = 1.0; break;
    case 1: m(0, 1) = m(1, 0) = 1.0; break;
    case 2: m(0, 1) = Complex(0.0, -1.0); m(1, 0) = Complex(0.0, 1.0); break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw std::invalid_argument("pauli: index must be 0..3");
  }
  return m;
}

std::array<double, 3> outcome_probabilities(const DensityOperator& rho_n,
                                            PauliBasis basis) {
  if (rho_n.dim() != 3) {
    throw std::invalid_argument("outcome_probabilities: expected the nuclear qutrit");
  }
  const auto& m = rho_n.matrix();
  const ComplexVector plus = basis_ket(basis, true);
  const ComplexVector minus = basis_ket(basis, false);
  std::array<double, 3> probs = {
      std::max(0.0, (plus.adjoint() * m * plus)(0, 0).real()),
      std::max(0.0, (minus.adjoint() * m * minus)(0, 0).real()),
      std::max(0.0, m(2, 2).real()),
  };
  const double total = probs[0] + probs[1] + probs[2];
  for (double& p : probs) p /= total;
  return probs;
}

MeasurementRecord simulate_counts(const DensityOperator& rho_n,
                                  PauliBasis basis, long long shots,
                                  std::uint64_t seed) {
  if (shots <= 0) {
    throw std::invalid_argument("simulate_counts: shots must be > 0");
  }
  const auto probs = outcome_probabilities(rho_n, basis);
  auto eng = make_engine(seed);
  const auto counts = multinomial_draw(eng, shots, probs);
  MeasurementRecord rec{basis, {counts[0], counts[1], counts[2]}, shots};
  rec.validate();
  return rec;
}

QstResult qst(const std::vector<MeasurementRecord>& records) {
  // Pool counts per basis.
  std::array<std::array<long long, 3>, 3> pooled{};
  std::array<bool, 3> seen{};
  long long total_shots = 0, leak_counts = 0;
  for (const auto& rec : records) {
    rec.validate();
    const int b = static_cast<int>(rec.basis);
    seen[b] = true;
    for (int o = 0; o < 3; ++o) pooled[b][o] += rec.counts[o];
    leak_counts += rec.counts[kOutcomeLeak];
    total_shots += rec.shots;
  }
  for (int b = 0; b < 3; ++b) {
    if (!seen[b]) {
      throw std::invalid_argument("qst: missing basis " +
                                  to_string(static_cast<PauliBasis>(b)));
    }
  }
  if (total_shots == 0) throw std::invalid_argument("qst: no shots");

  // Conditional qubit expectations; all-leak records carry no qubit info.
  std::array<double, 3> expectation{};
  for (int b = 0; b < 3; ++b) {
    const long long qubit_shots = pooled[b][kOutcomePlus] + pooled[b][kOutcomeMinus];
    expectation[b] =
        qubit_shots > 0
            ? static_cast<double>(pooled[b][kOutcomePlus] - pooled[b][kOutcomeMinus]) /
                  static_cast<double>(qubit_shots)
            : 0.0;
  }

  // rho = (I + <X> X + <Y> Y + <Z> Z) / 2 on the qubit subspace.
  ComplexMatrix linear = 0.5 * pauli(0);
  for (int b = 0; b < 3; ++b) linear += 0.5 * expectation[b] * pauli(b + 1);

  const double leak =
      static_cast<double>(leak_counts) / static_cast<double>(total_shots);
  return QstResult{
      DensityOperator(nv::nuclear_qubit_layout(), project_physical(linear)),
      leak};
}

ChiMatrix::ChiMatrix() : entries_(ComplexMatrix::Zero(4, 4)) {
  entries_(0, 0) = 1.0;
}

ChiMatrix::ChiMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != 4 || entries_.cols() != 4) {
    throw std::invalid_argument("ChiMatrix: must be 4x4");
  }
  if (!is_hermitian(entries_, 1e-10)) {
    throw std::invalid_argument("ChiMatrix: not Hermitian");
  }
  if (std::abs(entries_.trace().real() - 1.0) > 1e-10 ||
      std::abs(entries_.trace().imag()) > 1e-10) {
    throw std::invalid_argument("ChiMatrix: trace not 1");
  }
}

ChiMatrix qpt(const std::vector<PhotonState>& inputs,
              const std::vector<DensityOperator>& outputs) {
  if (inputs.size() != outputs.size()) {
    throw std::invalid_argument("qpt: inputs/outputs size mismatch");
  }
  if (inputs.size() < 4) {
    throw std::invalid_argument("qpt: at least four input states required");
  }

  const size_t n = inputs.size();
  Eigen::MatrixXcd a(4 * n, 16);
  Eigen::VectorXcd b(4 * n);
  for (size_t k = 0; k < n; ++k) {
    const ComplexMatrix rho_in = inputs[k].ket().projector();

    ComplexMatrix rho_out;
    if (outputs[k].dim() == 3) {
      rho_out = qubit_block(outputs[k].matrix());
      const double weight = rho_out.trace().real();
      if (weight <= 0.0) {
        throw std::invalid_argument("qpt: output state is pure leak");
      }
      rho_out /= weight;  // post-select out |0>_N
    } else if (outputs[k].dim() == 2) {
      rho_out = outputs[k].matrix();
    } else {
      throw std::invalid_argument("qpt: outputs must be qubit or qutrit states");
    }

    for (int m = 0; m < 4; ++m) {
      for (int nn = 0; nn < 4; ++nn) {
        const ComplexMatrix term = pauli(m) * rho_in * pauli(nn);
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            a(static_cast<Eigen::Index>(4 * k) + 2 * i + j, 4 * m + nn) =
                term(i, j);
          }
        }
      }
    }
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        b(static_cast<Eigen::Index>(4 * k) + 2 * i + j) = rho_out(i, j);
      }
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-9);
  if (svd.rank() < 16) {
    throw std::invalid_argument("qpt: rank-deficient input set");
  }
  const Eigen::VectorXcd x = svd.solve(b);

  ComplexMatrix chi(4, 4);
  for (int m = 0; m < 4; ++m) {
    for (int nn = 0; nn < 4; ++nn) chi(m, nn) = x(4 * m + nn);
  }
  chi = ((chi + chi.adjoint().eval()) / 2.0).eval();
  const double trace = chi.trace().real();
  if (std::abs(trace) < 1e-12) {
    throw std::runtime_error("qpt: degenerate fit, zero-trace chi");
  }
  chi /= trace;
  return ChiMatrix(std::move(chi));
}

BootstrapResult bootstrap_errorbar(
    const std::vector<MeasurementRecord>& records,
    const std::function<double(const std::vector<MeasurementRecord>&)>&
        estimator,
    int resamples, std::uint64_t seed) {
  if (resamples < 100) {
    throw std::invalid_argument("bootstrap_errorbar: resamples must be >= 100");
  }
  for (const auto& rec : records) rec.validate();

  const double estimate = estimator(records);

  std::vector<double> replicas(resamples);
  std::vector<MeasurementRecord> resampled = records;
  for (int r = 0; r < resamples; ++r) {
    auto eng = make_engine(seed, static_cast<std::uint64_t>(r) + 1);
    for (size_t i = 0; i < records.size(); ++i) {
      const auto& rec = records[i];
      if (rec.shots == 0) continue;
      std::array<double, 3> freq{};
      for (int o = 0; o < 3; ++o) {
        freq[o] = static_cast<double>(rec.counts[o]) /
                  static_cast<double>(rec.shots);
      }
      const auto counts = multinomial_draw(eng, rec.shots, freq);
      resampled[i].counts = {counts[0], counts[1], counts[2]};
    }
    replicas[r] = estimator(resampled);
  }

  double mean = 0.0;
  for (double v : replicas) mean += v;
  mean /= resamples;
  double var = 0.0;
  for (double v : replicas) var += (v - mean) * (v - mean);
  var /= (resamples - 1);
  return BootstrapResult{estimate, std::sqrt(var)};
}

}  // namespace qtst
