#include <doctest.h>

#include "qtst/tomography.hpp"
#include "test_helpers.hpp"

using namespace qtst;
using namespace qtst::testing;

namespace {

DensityOperator embed_qubit(const ComplexMatrix& qubit, double leak) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m.topLeftCorner(2, 2) = (1.0 - leak) * qubit;
  m(2, 2) = leak;
  return DensityOperator(nv::nuclear_layout(), std::move(m));
}

std::vector<MeasurementRecord> records_for(const DensityOperator& rho,
                                           long long shots,
                                           std::uint64_t seed) {
  std::vector<MeasurementRecord> records;
  for (int b = 0; b < 3; ++b) {
    records.push_back(simulate_counts(rho, static_cast<PauliBasis>(b), shots,
                                      mix_seed(seed, b)));
  }
  return records;
}

}  // namespace

TEST_CASE("simulate_counts: pure Z state, determinism") {
  const DensityOperator up = embed_qubit(
      (ComplexMatrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished(), 0.0);
  const MeasurementRecord rec = simulate_counts(up, PauliBasis::Z, 5000, 42);
  CHECK(rec.counts[kOutcomePlus] == 5000);
  CHECK(rec.counts[kOutcomeMinus] == 0);
  CHECK(rec.counts[kOutcomeLeak] == 0);

  const MeasurementRecord again = simulate_counts(up, PauliBasis::Z, 5000, 42);
  CHECK(rec.counts == again.counts);

  const DensityOperator mixed = embed_qubit(identity(2) / 2.0, 0.0);
  const MeasurementRecord a = simulate_counts(mixed, PauliBasis::X, 1000, 1);
  const MeasurementRecord b = simulate_counts(mixed, PauliBasis::X, 1000, 2);
  CHECK(a.counts != b.counts);  // different seeds explore different draws

  CHECK_THROWS_AS((void)simulate_counts(mixed, PauliBasis::X, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("simulate_counts: law of large numbers on the mixed state") {
  const DensityOperator mixed = embed_qubit(identity(2) / 2.0, 0.0);
  const long long shots = 1000000;
  const MeasurementRecord rec = simulate_counts(mixed, PauliBasis::X, shots, 7);
  // Three-sigma band around 1/2 for a fair binomial.
  const double sigma = 0.5 / std::sqrt(static_cast<double>(shots));
  const double plus_freq =
      static_cast<double>(rec.counts[kOutcomePlus]) / shots;
  CHECK(std::abs(plus_freq - 0.5) < 3.0 * sigma);
  CHECK(rec.counts[kOutcomeLeak] == 0);
}

TEST_CASE("simulate_counts: leak outcome sampled at its Born weight") {
  const DensityOperator leaked = embed_qubit(identity(2) / 2.0, 0.25);
  const long long shots = 200000;
  const MeasurementRecord rec =
      simulate_counts(leaked, PauliBasis::Z, shots, 11);
  const double leak_freq =
      static_cast<double>(rec.counts[kOutcomeLeak]) / shots;
  CHECK(std::abs(leak_freq - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / shots));
}

TEST_CASE("qst: noiseless inversion of the maximally mixed state") {
  // Infinite-shot limit fed as exact integer records.
  const DensityOperator mixed = embed_qubit(identity(2) / 2.0, 0.0);
  std::vector<MeasurementRecord> records;
  for (int b = 0; b < 3; ++b) {
    records.push_back(exact_record(mixed, static_cast<PauliBasis>(b), 1000));
  }
  const QstResult res = qst(records);
  CHECK(max_abs_diff(res.rho.matrix(), identity(2) / 2.0) < 1e-10);
  CHECK(res.leak == 0.0);
}

TEST_CASE("qst: noiseless inversion of the six canonical states") {
  for (const auto& in : six_inputs()) {
    const DensityOperator target =
        embed_qubit(in.state.ket().projector(), 0.0);
    std::vector<MeasurementRecord> records;
    for (int b = 0; b < 3; ++b) {
      records.push_back(exact_record(target, static_cast<PauliBasis>(b), 1000));
    }
    const QstResult res = qst(records);
    CHECK(max_abs_diff(res.rho.matrix(), in.state.ket().projector()) < 1e-10);
  }
}

TEST_CASE("qst: pooled leak estimate") {
  const DensityOperator leaked = embed_qubit(identity(2) / 2.0, 0.2);
  std::vector<MeasurementRecord> records;
  for (int b = 0; b < 3; ++b) {
    records.push_back(exact_record(leaked, static_cast<PauliBasis>(b), 1000));
  }
  const QstResult res = qst(records);
  CHECK(res.leak == doctest::Approx(0.2).epsilon(1e-12));

  records.pop_back();
  CHECK_THROWS_AS((void)qst(records), std::invalid_argument);
}

TEST_CASE("qst: finite statistics keep the Bloch vector bounded") {
  const DensityOperator mixed = embed_qubit(identity(2) / 2.0, 0.0);
  const long long shots = 10000;
  const auto records = records_for(mixed, shots, 31);
  const QstResult res = qst(records);
  // |r| should be within a few standard errors of zero.
  const ComplexMatrix rho = res.rho.matrix();
  const double rx = 2.0 * rho(0, 1).real();
  const double ry = -2.0 * rho(0, 1).imag();
  const double rz = (rho(0, 0) - rho(1, 1)).real();
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  CHECK(r < 5.0 / std::sqrt(static_cast<double>(shots)));
}

TEST_CASE("qst output is always physical") {
  auto eng = make_engine(303);
  for (int trial = 0; trial < 50; ++trial) {
    // Nearly pure states make raw linear inversion overshoot routinely.
    const PureState psi = random_pure_state(2, eng);
    const DensityOperator target = embed_qubit(psi.projector(), 0.0);
    const auto records = records_for(target, 200, mix_seed(304, trial));
    const QstResult res = qst(records);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(res.rho.matrix(),
                                                        Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-14);
    CHECK(std::abs(res.rho.matrix().trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("qst convergence: 1e5 shots recover random pure states") {
  auto eng = make_engine(305);
  int hits = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const PureState psi = random_pure_state(2, eng);
    const DensityOperator target = embed_qubit(psi.projector(), 0.0);
    const auto records = records_for(target, 100000, mix_seed(306, trial));
    const QstResult res = qst(records);
    if (trace_distance(res.rho.matrix(), psi.projector()) <= 0.02) ++hits;
  }
  CHECK(hits >= trials - 1);
}

TEST_CASE("qst consistency: trace distance shrinks with shots") {
  auto eng = make_engine(307);
  const PureState psi = random_pure_state(2, eng);
  const DensityOperator target = embed_qubit(psi.projector(), 0.0);
  const long long scales[4] = {100, 1000, 10000, 100000};
  double mean_distance[4] = {};
  const int seeds = 50;
  for (int s = 0; s < 4; ++s) {
    double total = 0.0;
    for (int k = 0; k < seeds; ++k) {
      const auto records =
          records_for(target, scales[s], mix_seed(308 + s, k));
      total += trace_distance(qst(records).rho.matrix(), psi.projector());
    }
    mean_distance[s] = total / seeds;
  }
  CHECK(mean_distance[1] < mean_distance[0]);
  CHECK(mean_distance[2] < mean_distance[1]);
  CHECK(mean_distance[3] < mean_distance[2]);
}

TEST_CASE("qpt: identity process") {
  std::vector<PhotonState> inputs;
  std::vector<DensityOperator> outputs;
  for (const auto& in : six_inputs()) {
    inputs.push_back(in.state);
    outputs.push_back(embed_qubit(in.state.ket().projector(), 0.0));
  }
  const ChiMatrix chi = qpt(inputs, outputs);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  CHECK(max_abs_diff(chi.entries(), expected) < 1e-10);
}

TEST_CASE("qpt: sigma_x conjugation") {
  std::vector<PhotonState> inputs;
  std::vector<DensityOperator> outputs;
  for (const auto& in : six_inputs()) {
    inputs.push_back(in.state);
    const ComplexMatrix flipped =
        pauli(1) * in.state.ket().projector() * pauli(1);
    outputs.push_back(embed_qubit(flipped, 0.0));
  }
  const ChiMatrix chi = qpt(inputs, outputs);
  CHECK(chi.real_at(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(chi.real_at(0, 0)) < 1e-10);
}

TEST_CASE("qpt: full dephasing against the Kraus oracle") {
  const QuantumChannel dephase = dephasing_channel(0.0);
  std::vector<PhotonState> inputs;
  std::vector<DensityOperator> outputs;
  for (const auto& in : six_inputs()) {
    inputs.push_back(in.state);
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (const auto& k : dephase.kraus_ops()) {
      out += k * in.state.ket().projector() * k.adjoint();
    }
    outputs.push_back(embed_qubit(out, 0.0));
  }
  const ChiMatrix chi = qpt(inputs, outputs);
  CHECK(chi.real_at(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(chi.real_at(3, 3) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(max_abs_diff(chi.entries(), chi_from_kraus(dephase)) < 1e-10);
}

TEST_CASE("qpt matches the Kraus-to-chi oracle for random channels") {
  auto eng = make_engine(309);
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumChannel ch = random_qubit_channel(eng);
    std::vector<PhotonState> inputs;
    std::vector<DensityOperator> outputs;
    for (const auto& in : six_inputs()) {
      inputs.push_back(in.state);
      ComplexMatrix out = ComplexMatrix::Zero(2, 2);
      for (const auto& k : ch.kraus_ops()) {
        out += k * in.state.ket().projector() * k.adjoint();
      }
      out = ((out + out.adjoint().eval()) / 2.0).eval();
      outputs.push_back(embed_qubit(out, 0.0));
    }
    const ChiMatrix chi = qpt(inputs, outputs);
    CHECK(max_abs_diff(chi.entries(), chi_from_kraus(ch)) < 1e-8);

    // chi of a CPTP map is positive semidefinite.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(chi.entries(),
                                                        Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() > -1e-8);
  }
}

TEST_CASE("qpt: leak is post-selected out of qutrit outputs") {
  std::vector<PhotonState> inputs;
  std::vector<DensityOperator> outputs;
  for (const auto& in : six_inputs()) {
    inputs.push_back(in.state);
    outputs.push_back(embed_qubit(in.state.ket().projector(), 0.016));
  }
  const ChiMatrix chi = qpt(inputs, outputs);
  CHECK(chi.real_at(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("qpt: rank-deficient input set is rejected") {
  std::vector<PhotonState> inputs(6, PhotonState::plus());
  std::vector<DensityOperator> outputs(
      6, embed_qubit(PhotonState::plus().ket().projector(), 0.0));
  CHECK_THROWS_AS((void)qpt(inputs, outputs), std::invalid_argument);
}

TEST_CASE("bootstrap_errorbar: zero variance, determinism") {
  MeasurementRecord rec{PauliBasis::Z, {1000, 0, 0}, 1000};
  auto estimator = [](const std::vector<MeasurementRecord>& records) {
    return static_cast<double>(records[0].counts[kOutcomePlus]) /
           static_cast<double>(records[0].shots);
  };
  const auto res = bootstrap_errorbar({rec}, estimator, 200, 5);
  CHECK(res.estimate == 1.0);
  CHECK(res.stddev == 0.0);

  MeasurementRecord noisy{PauliBasis::Z, {700, 250, 50}, 1000};
  const auto a = bootstrap_errorbar({noisy}, estimator, 200, 6);
  const auto b = bootstrap_errorbar({noisy}, estimator, 200, 6);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stddev == b.stddev);
  CHECK(a.stddev > 0.0);

  CHECK_THROWS_AS((void)bootstrap_errorbar({rec}, estimator, 50, 5),
                  std::invalid_argument);
}

TEST_CASE("bootstrap stddev scales as one over sqrt(shots)") {
  const DensityOperator target = embed_qubit(
      PhotonState::plus().ket().projector() * 0.9 + identity(2) * 0.05, 0.0);
  auto fidelity_estimator = [](const std::vector<MeasurementRecord>& records) {
    const QstResult res = qst(records);
    return state_fidelity(
        DensityOperator(nv::nuclear_qubit_layout(), res.rho.matrix()),
        PureState::normalized(
            (ComplexVector(2) << 1.0, 1.0).finished()));
  };

  double scaled[3] = {};
  const long long shots[3] = {1000, 10000, 100000};
  for (int s = 0; s < 3; ++s) {
    const auto records = records_for(target, shots[s], mix_seed(310, s));
    const auto res =
        bootstrap_errorbar(records, fidelity_estimator, 400, mix_seed(311, s));
    scaled[s] = res.stddev * std::sqrt(static_cast<double>(shots[s]));
  }
  const double lo = std::min({scaled[0], scaled[1], scaled[2]});
  const double hi = std::max({scaled[0], scaled[1], scaled[2]});
  CHECK(hi / lo < 1.5);
}
