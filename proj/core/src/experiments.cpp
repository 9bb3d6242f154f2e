#include "qtst/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "qtst/rng.hpp"
#include "qtst/version.hpp"

namespace qtst {
namespace {

// Substream ids: each grid point owns a block of 64 streams, inputs own 8
// streams each within it. Stream 63 of a block seeds the joint bootstrap.
constexpr std::uint64_t kStreamsPerPoint = 64;
constexpr std::uint64_t kStreamsPerInput = 8;

std::uint64_t point_stream(size_t point, size_t input, size_t slot) {
  return point * kStreamsPerPoint + input * kStreamsPerInput + slot;
}

void run_parallel(size_t n, const std::function<void(size_t)>& body) {
  const size_t threads =
      std::min<size_t>(static_cast<size_t>(resolved_thread_count()), n);
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (size_t i = t; i < n; i += threads) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

RunMetadata make_metadata(const NoiseParams& np, const RateParams& rp,
                          std::uint64_t seed, long long shots,
                          int resamples) {
  return RunMetadata{np, rp, seed, shots, resamples, kRevision};
}

// Records in input-major order, X/Y/Z per input.
std::vector<MeasurementRecord> sample_input_records(
    const DensityOperator& rho_n, long long shots, std::uint64_t seed,
    size_t point, size_t input) {
  std::vector<MeasurementRecord> records;
  records.reserve(3);
  for (int b = 0; b < 3; ++b) {
    records.push_back(simulate_counts(
        rho_n, static_cast<PauliBasis>(b), shots,
        mix_seed(seed, point_stream(point, input, static_cast<size_t>(b)))));
  }
  return records;
}

// Fidelity estimator from one input's X/Y/Z records: reassemble the full
// qutrit from the reconstructed qubit state and the pooled leak estimate,
// then score against the embedded target. Matches the exact-mode quantity.
double fidelity_from_records(const std::vector<MeasurementRecord>& records,
                             const PhotonState& input) {
  const QstResult res = qst(records);
  ComplexMatrix rho3 = ComplexMatrix::Zero(3, 3);
  rho3.topLeftCorner(2, 2) = (1.0 - res.leak) * res.rho.matrix();
  rho3(2, 2) = res.leak;
  const DensityOperator full(nv::nuclear_layout(), std::move(rho3));
  return state_fidelity(full, input.nuclear_target());
}

struct GroupEstimate {
  double mean = 0.0;
  double stddev = 0.0;
};

// Average transfer fidelity over a subset of the six inputs at one grid
// point, with a joint parametric bootstrap over all sampled records.
GroupEstimate sampled_group_fidelity(
    const std::vector<DensityOperator>& states,
    const std::vector<size_t>& member_inputs, long long shots,
    std::uint64_t seed, size_t point, int resamples) {
  std::vector<MeasurementRecord> all_records;
  for (size_t input : member_inputs) {
    auto recs = sample_input_records(states[input], shots, seed, point, input);
    all_records.insert(all_records.end(), recs.begin(), recs.end());
  }
  auto estimator = [&](const std::vector<MeasurementRecord>& records) {
    double sum = 0.0;
    for (size_t g = 0; g < member_inputs.size(); ++g) {
      const std::vector<MeasurementRecord> triple(
          records.begin() + static_cast<long>(3 * g),
          records.begin() + static_cast<long>(3 * g + 3));
      sum += fidelity_from_records(triple,
                                   six_inputs()[member_inputs[g]].state);
    }
    return sum / static_cast<double>(member_inputs.size());
  };
  const auto boot = bootstrap_errorbar(
      all_records, estimator, resamples,
      mix_seed(seed, point_stream(point, member_inputs.front(),
                                  kStreamsPerInput - 1)));
  return GroupEstimate{boot.estimate, boot.stddev};
}

}  // namespace

void RateParams::validate() const {
  if (!(p_zpl > 0.0 && p_zpl <= 1.0)) {
    throw std::invalid_argument("rates.p_zpl: must be in (0, 1]");
  }
  if (!(attenuation_db_per_km >= 0.0)) {
    throw std::invalid_argument("rates.attenuation_db_per_km: must be >= 0");
  }
  if (!(repetition_rate_hz > 0.0)) {
    throw std::invalid_argument("rates.repetition_rate_hz: must be > 0");
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo + step * i;
  return out;
}

int resolved_thread_count() {
  const char* env = std::getenv("QTST_SIM_THREADS");
  long requested = 0;
  if (env != nullptr) {
    char* end = nullptr;
    requested = std::strtol(env, &end, 10);
    if (end == env || requested < 0) requested = 0;
  }
  if (requested > 0) return static_cast<int>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double transfer_fidelity(const PhotonState& input, double detuning_mhz,
                         double delay_us, const NoiseParams& np) {
  const QtstOutcome outcome = run_qtst(input, detuning_mhz, delay_us, np);
  return state_fidelity(outcome.rho_nuclear, input.nuclear_target());
}

SweepResult sweep_frequency(const std::vector<double>& detunings_mhz,
                            const NoiseParams& np, long long shots,
                            std::uint64_t seed, int resamples) {
  if (detunings_mhz.empty()) {
    throw std::invalid_argument("sweep_frequency: empty grid");
  }
  np.validate();

  const size_t n = detunings_mhz.size();
  Series fidelity{"avg_fidelity", std::vector<double>(n), std::vector<double>(n)};
  Series herald{"herald_prob", std::vector<double>(n), std::vector<double>(n, 0.0)};

  const std::vector<size_t> all_inputs = {0, 1, 2, 3, 4, 5};
  run_parallel(n, [&](size_t p) {
    std::vector<DensityOperator> states;
    double herald_sum = 0.0;
    double fid_sum = 0.0;
    for (const auto& labeled : six_inputs()) {
      QtstOutcome outcome = run_qtst(labeled.state, detunings_mhz[p], 0.0, np);
      herald_sum += outcome.herald_prob;
      fid_sum += state_fidelity(outcome.rho_nuclear,
                                labeled.state.nuclear_target());
      states.push_back(std::move(outcome.rho_nuclear));
    }
    herald.values[p] = herald_sum / 6.0;
    if (shots == 0) {
      fidelity.values[p] = fid_sum / 6.0;
      fidelity.stddevs[p] = 0.0;
    } else {
      const auto est = sampled_group_fidelity(states, all_inputs, shots, seed,
                                              p, resamples);
      fidelity.values[p] = est.mean;
      fidelity.stddevs[p] = est.stddev;
    }
  });

  return SweepResult{"detuning",
                     "MHz",
                     detunings_mhz,
                     {std::move(fidelity), std::move(herald)},
                     std::nullopt,
                     make_metadata(np, RateParams{}, seed, shots, resamples)};
}

SweepResult sweep_arrival_time(const std::vector<double>& delays_us,
                               const NoiseParams& np, long long shots,
                               std::uint64_t seed, int resamples) {
  if (delays_us.empty()) {
    throw std::invalid_argument("sweep_arrival_time: empty grid");
  }
  np.validate();

  const size_t n = delays_us.size();
  Series basis{"basis_fidelity", std::vector<double>(n), std::vector<double>(n)};
  Series superpos{"superposition_fidelity", std::vector<double>(n),
                  std::vector<double>(n)};

  const std::vector<size_t> basis_inputs = {0, 1};
  const std::vector<size_t> superpos_inputs = {2, 3, 4, 5};
  run_parallel(n, [&](size_t p) {
    std::vector<DensityOperator> states;
    std::vector<double> fids;
    for (const auto& labeled : six_inputs()) {
      QtstOutcome outcome = run_qtst(labeled.state, 0.0, delays_us[p], np);
      fids.push_back(state_fidelity(outcome.rho_nuclear,
                                    labeled.state.nuclear_target()));
      states.push_back(std::move(outcome.rho_nuclear));
    }
    if (shots == 0) {
      basis.values[p] = (fids[0] + fids[1]) / 2.0;
      superpos.values[p] = (fids[2] + fids[3] + fids[4] + fids[5]) / 4.0;
      basis.stddevs[p] = superpos.stddevs[p] = 0.0;
    } else {
      const auto b = sampled_group_fidelity(states, basis_inputs, shots, seed,
                                            p, resamples);
      const auto s = sampled_group_fidelity(states, superpos_inputs, shots,
                                            seed, p, resamples);
      basis.values[p] = b.mean;
      basis.stddevs[p] = b.stddev;
      superpos.values[p] = s.mean;
      superpos.stddevs[p] = s.stddev;
    }
  });

  return SweepResult{"delay",
                     "us",
                     delays_us,
                     {std::move(basis), std::move(superpos)},
                     std::nullopt,
                     make_metadata(np, RateParams{}, seed, shots, resamples)};
}

SweepResult entanglement_decay(const std::vector<double>& delays_us,
                               const NoiseParams& np, long long shots,
                               std::uint64_t seed) {
  if (delays_us.empty()) {
    throw std::invalid_argument("entanglement_decay: empty grid");
  }
  np.validate();

  const size_t n = delays_us.size();
  Series fidelity{"fidelity", std::vector<double>(n), std::vector<double>(n)};
  const PureState target = nv::bell_phi_plus_eN();
  const DensityOperator prepared = prepare_entangled(np);

  run_parallel(n, [&](size_t p) {
    const DensityOperator rho = dephase_eN(prepared, delays_us[p], np);
    const double f = state_fidelity(rho, target);
    if (shots == 0) {
      fidelity.values[p] = f;
      fidelity.stddevs[p] = 0.0;
    } else {
      // Bell-projection herald as a Bernoulli trial per shot.
      auto eng = make_engine(seed, point_stream(p, 0, 0));
      const long long k = binomial_draw(eng, shots, f);
      const double est = static_cast<double>(k) / static_cast<double>(shots);
      fidelity.values[p] = est;
      fidelity.stddevs[p] =
          std::sqrt(std::max(0.0, est * (1.0 - est)) /
                    static_cast<double>(shots));
    }
  });

  return SweepResult{"delay",
                     "us",
                     delays_us,
                     {std::move(fidelity)},
                     std::nullopt,
                     make_metadata(np, RateParams{}, seed, shots, 0)};
}

TransferSummary transfer_summary(const NoiseParams& np, long long shots,
                                 std::uint64_t seed, int resamples) {
  np.validate();

  std::vector<std::string> labels;
  std::vector<PhotonState> inputs;
  std::vector<DensityOperator> exact_states;
  for (const auto& labeled : six_inputs()) {
    labels.push_back(labeled.label);
    inputs.push_back(labeled.state);
    exact_states.push_back(run_qtst(labeled.state, 0.0, 0.0, np).rho_nuclear);
  }

  TransferSummary summary;
  summary.labels = std::move(labels);
  summary.metadata = make_metadata(np, RateParams{}, seed, shots, resamples);

  if (shots == 0) {
    for (size_t k = 0; k < inputs.size(); ++k) {
      summary.fidelities.push_back(
          state_fidelity(exact_states[k], inputs[k].nuclear_target()));
      summary.stddevs.push_back(0.0);
    }
    summary.chi = qpt(inputs, exact_states);
  } else {
    std::vector<DensityOperator> reconstructed;
    for (size_t k = 0; k < inputs.size(); ++k) {
      const auto records =
          sample_input_records(exact_states[k], shots, seed, 0, k);
      const auto boot = bootstrap_errorbar(
          records,
          [&](const std::vector<MeasurementRecord>& recs) {
            return fidelity_from_records(recs, inputs[k]);
          },
          resamples,
          mix_seed(seed, point_stream(0, k, kStreamsPerInput - 1)));
      summary.fidelities.push_back(boot.estimate);
      summary.stddevs.push_back(boot.stddev);

      const QstResult res = qst(records);
      ComplexMatrix rho3 = ComplexMatrix::Zero(3, 3);
      rho3.topLeftCorner(2, 2) = (1.0 - res.leak) * res.rho.matrix();
      rho3(2, 2) = res.leak;
      reconstructed.emplace_back(nv::nuclear_layout(), std::move(rho3));
    }
    summary.chi = qpt(inputs, reconstructed);
  }

  double sum = 0.0, var = 0.0;
  for (double f : summary.fidelities) sum += f;
  summary.average = sum / static_cast<double>(summary.fidelities.size());
  for (double s : summary.stddevs) var += s * s;
  summary.average_stddev =
      std::sqrt(var) / static_cast<double>(summary.stddevs.size());
  return summary;
}

SweepResult rate_compare(const std::vector<double>& lengths_km,
                         const RateParams& rp) {
  if (lengths_km.empty()) {
    throw std::invalid_argument("rate_compare: empty grid");
  }
  rp.validate();
  for (double l : lengths_km) {
    if (l < 0.0) throw std::invalid_argument("rate_compare: negative length");
  }

  const size_t n = lengths_km.size();
  Series eta{"eta", std::vector<double>(n), std::vector<double>(n, 0.0)};
  Series one{"rate_one_photon_hz", std::vector<double>(n),
             std::vector<double>(n, 0.0)};
  Series two{"rate_two_photon_hz", std::vector<double>(n),
             std::vector<double>(n, 0.0)};
  for (size_t i = 0; i < n; ++i) {
    const double transmittance =
        std::pow(10.0, -rp.attenuation_db_per_km * lengths_km[i] / 10.0);
    eta.values[i] = transmittance;
    one.values[i] = rp.repetition_rate_hz * rp.p_zpl * std::sqrt(transmittance);
    two.values[i] = rp.repetition_rate_hz * rp.p_zpl * rp.p_zpl * transmittance;
  }

  return SweepResult{"length",
                     "km",
                     lengths_km,
                     {std::move(eta), std::move(one), std::move(two)},
                     crossover_transmittance(rp),
                     make_metadata(NoiseParams{}, rp, 0, 0, 0)};
}

double crossover_transmittance(const RateParams& rp) {
  return rp.p_zpl * rp.p_zpl;
}

}  // namespace qtst
