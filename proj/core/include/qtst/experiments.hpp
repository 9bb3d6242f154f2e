#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtst/tomography.hpp"

namespace qtst {

/// Entanglement-rate model inputs. Transmittance is eta(L) =
/// 10^(-attenuation * L / 10); constant efficiencies are absorbed into
/// repetition_rate_hz, so only the scaling laws are meaningful.
struct RateParams {
  double p_zpl = 0.03;                 // zero-phonon-line emission fraction
  double attenuation_db_per_km = 0.2;  // fiber loss
  double repetition_rate_hz = 1.0e6;   // attempt rate

  void validate() const;
  bool operator==(const RateParams&) const = default;
};

struct Series {
  std::string name;
  std::vector<double> values;
  std::vector<double> stddevs;
};

struct RunMetadata {
  NoiseParams noise;
  RateParams rates;
  std::uint64_t seed = 0;
  long long shots = 0;  // 0 = exact mode (analytic probabilities)
  int resamples = 0;
  std::string revision;
};

struct SweepResult {
  std::string axis_name;
  std::string axis_unit;
  std::vector<double> axis;
  std::vector<Series> series;  // every series has axis.size() entries
  std::optional<double> crossover_eta;  // rate_compare only
  RunMetadata metadata;
};

struct TransferSummary {
  std::vector<std::string> labels;  // the six canonical inputs
  std::vector<double> fidelities;
  std::vector<double> stddevs;
  double average = 0.0;
  double average_stddev = 0.0;
  ChiMatrix chi;
  RunMetadata metadata;
};

std::vector<double> linspace(double lo, double hi, int n);

/// Threads used for sweep evaluation: QTST_SIM_THREADS, where 0 or an
/// unset/unparsable value means hardware concurrency.
int resolved_thread_count();

/// Transfer fidelity of a single attempt: <psi|rho_N|psi> against the
/// input embedded in the qutrit, so |0>_N leakage counts as error.
double transfer_fidelity(const PhotonState& input, double detuning_mhz,
                         double delay_us, const NoiseParams& np);

/// Per detuning: six-input average transfer fidelity (bootstrap error bars
/// when shots > 0, exact when shots == 0) and six-input average herald
/// probability. Delay is zero.
SweepResult sweep_frequency(const std::vector<double>& detunings_mhz,
                            const NoiseParams& np, long long shots,
                            std::uint64_t seed, int resamples = 200);

/// Per delay: average fidelity of the basis inputs |+1>,|-1> and of the
/// four superposition inputs, at zero detuning.
SweepResult sweep_arrival_time(const std::vector<double>& delays_us,
                               const NoiseParams& np, long long shots,
                               std::uint64_t seed, int resamples = 200);

/// Fidelity of the dephased electron-nuclear state against |Phi+> per
/// delay. Finite-shot mode draws the Bell-projection outcome as a
/// Bernoulli sample and reports the binomial shot-noise deviation.
SweepResult entanglement_decay(const std::vector<double>& delays_us,
                               const NoiseParams& np, long long shots,
                               std::uint64_t seed);

/// Six-input transfer at zero detuning and delay: per-input fidelities,
/// their average, and the process chi matrix (reconstructed from sampled
/// tomography when shots > 0, from exact outputs when shots == 0).
TransferSummary transfer_summary(const NoiseParams& np, long long shots,
                                 std::uint64_t seed, int resamples = 200);

/// Entanglement-rate scaling versus node separation:
///   rate_one_photon = repetition_rate * p_zpl   * sqrt(eta)
///   rate_two_photon = repetition_rate * p_zpl^2 * eta
/// (the teleportation-based transfer shares the two-photon scaling).
SweepResult rate_compare(const std::vector<double>& lengths_km,
                         const RateParams& rp);

/// Reported crossover transmittance eta* = p_zpl^2.
double crossover_transmittance(const RateParams& rp);

}  // namespace qtst
