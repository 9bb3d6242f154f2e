#include <benchmark/benchmark.h>

#include "qtst/experiments.hpp"
#include "qtst/nv.hpp"
#include "qtst/ops.hpp"
#include "qtst/protocol.hpp"
#include "qtst/rng.hpp"
#include "qtst/tomography.hpp"

namespace {

using namespace qtst;

void BM_Kron(benchmark::State& state) {
  const ComplexMatrix a = nv::psi_plus_pe().projector();
  const ComplexMatrix b = identity(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kron(a, b));
  }
}
BENCHMARK(BM_Kron);

void BM_PartialTrace(benchmark::State& state) {
  const NoiseParams np;
  const QtstOutcome outcome = run_qtst(PhotonState::plus_i(), 0.0, 0.5, np);
  const ComplexMatrix joint = kron(PhotonState::plus_i().ket().projector(),
                                   prepare_entangled(np).matrix());
  const DensityOperator rho(nv::full_layout(), joint);
  benchmark::DoNotOptimize(outcome.leak_prob);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(rho, {"nuclear"}));
  }
}
BENCHMARK(BM_PartialTrace);

void BM_StrainedProjector(benchmark::State& state) {
  const nv::StrainParams sp;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nv::bsm_projector(sp, /*ideal=*/false));
  }
}
BENCHMARK(BM_StrainedProjector);

void BM_RunQtst(benchmark::State& state) {
  const NoiseParams np;
  const PhotonState input = PhotonState::plus_i();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_qtst(input, 25.0, 0.5, np));
  }
}
BENCHMARK(BM_RunQtst);

void BM_SimulateCounts(benchmark::State& state) {
  const NoiseParams np;
  const QtstOutcome outcome = run_qtst(PhotonState::plus(), 0.0, 0.0, np);
  std::uint64_t seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_counts(outcome.rho_nuclear,
                                             PauliBasis::X,
                                             state.range(0), seed++));
  }
}
BENCHMARK(BM_SimulateCounts)->Arg(1000)->Arg(100000);

void BM_Qst(benchmark::State& state) {
  const NoiseParams np;
  const QtstOutcome outcome = run_qtst(PhotonState::plus(), 0.0, 0.0, np);
  std::vector<MeasurementRecord> records;
  for (int b = 0; b < 3; ++b) {
    records.push_back(simulate_counts(outcome.rho_nuclear,
                                      static_cast<PauliBasis>(b), 100000,
                                      mix_seed(11, b)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(qst(records));
  }
}
BENCHMARK(BM_Qst);

void BM_SweepFrequencyExact(benchmark::State& state) {
  const NoiseParams np;
  const auto grid = linspace(-100.0, 100.0, 21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_frequency(grid, np, 0, 1));
  }
}
BENCHMARK(BM_SweepFrequencyExact);

}  // namespace

BENCHMARK_MAIN();
