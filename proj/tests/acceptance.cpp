// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qtst/experiments.hpp"
#include "qtst/runner.hpp"
#include "qtst/version.hpp"
#include "test_helpers.hpp"

namespace {

using namespace qtst;
using namespace qtst::testing;
namespace fs = std::filesystem;

int g_failures = 0;

void report(int number, bool ok, double seconds, double limit_seconds,
            const std::string& detail) {
  const bool in_time = limit_seconds <= 0.0 || seconds < limit_seconds;
  const bool pass = ok && in_time;
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %02d (%.2f s): %s%s\n", pass ? "PASS" : "FAIL",
              number, seconds, detail.c_str(),
              in_time ? "" : " [time limit exceeded]");
  std::fflush(stdout);
}

void run_criterion(int number, double limit_seconds,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" unexpected exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(number, ok, seconds, limit_seconds, detail);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

char buf[256];

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

bool criterion_1_average_fidelity(std::string& detail) {
  const TransferSummary summary = transfer_summary(NoiseParams{}, 0, 1);
  detail = fmt("six-input average transfer fidelity %.6f in [0.92, 0.96]",
               summary.average);
  return summary.average >= 0.92 && summary.average <= 0.96;
}

bool criterion_2_frequency_sweep(std::string& detail) {
  const NoiseParams np;
  const auto grid = linspace(-100.0, 100.0, 21);
  const SweepResult result = sweep_frequency(grid, np, 0, 1);

  const auto& fidelity = result.series[0].values;
  const double spread =
      *std::max_element(fidelity.begin(), fidelity.end()) -
      *std::min_element(fidelity.begin(), fidelity.end());

  const GaussianFit fit =
      fit_gaussian(grid, result.series[1].values, 10.0, 300.0);
  detail = fmt("fidelity spread %.2e < 1e-12; herald sigma %.3f MHz in 61 +- 1",
               spread, fit.sigma);
  return spread < 1e-12 && std::abs(fit.sigma - np.sigma_f_mhz) <= 1.0;
}

bool criterion_3_arrival_time_sweep(std::string& detail) {
  const NoiseParams np;
  const auto grid = linspace(0.0, 3.0, 31);
  const SweepResult result = sweep_arrival_time(grid, np, 0, 1);

  const auto& basis = result.series[0].values;
  const double spread = *std::max_element(basis.begin(), basis.end()) -
                        *std::min_element(basis.begin(), basis.end());

  const double at_100ns =
      sweep_arrival_time({0.1}, np, 0, 1).series[1].values[0];

  const GaussianFit fit =
      fit_gaussian(grid, result.series[1].values, 0.1, 5.0);
  const double sigma_err = std::abs(fit.sigma - np.sigma_t_us) / np.sigma_t_us;
  detail = fmt("basis spread %.2e; superposition(0.1us) %.4f >= 0.93; "
               "fitted sigma_t off by %.2f%%",
               spread, at_100ns, 100.0 * sigma_err);
  return spread < 1e-12 && at_100ns >= 0.93 && sigma_err <= 0.05;
}

bool criterion_4_entanglement_decay(std::string& detail) {
  const NoiseParams np;
  const auto grid = linspace(0.0, 3.0, 31);
  const SweepResult result = entanglement_decay(grid, np, 0, 1);

  const double f0 = result.series[0].values[0];
  const double f10 = entanglement_decay({10.0}, np, 0, 1).series[0].values[0];

  double worst = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double c = coherence_factor(grid[i], np.sigma_t_us);
    const double analytic = 0.5 + (np.prep_fidelity - 0.5) * c;
    worst = std::max(worst, std::abs(result.series[0].values[i] - analytic));
  }
  detail = fmt("F(0) = %.12f; F(10us) = %.12f; max |F - analytic| = %.2e",
               f0, f10, worst);
  return std::abs(f0 - 0.97) <= 1e-9 && f10 >= 0.5 - 1e-12 && f10 <= 0.51 &&
         worst < 1e-10;
}

bool criterion_5_strain_calibration(std::string& detail) {
  const double calibrated =
      std::norm(nv::strained_a2(nv::StrainParams{}).overlap(nv::psi_plus_pe()));
  const double unstrained = std::norm(
      nv::strained_a2({0.0, nv::kCalibratedLambdaSoGhz}).overlap(nv::psi_plus_pe()));
  detail = fmt("overlap(1.25 GHz) = %.6f in 0.98 +- 0.01; overlap(0) = %.15f",
               calibrated, unstrained);
  return std::abs(calibrated - 0.98) <= 0.01 &&
         std::abs(unstrained - 1.0) < 1e-12;
}

bool criterion_6_spam_leak(std::string& detail) {
  double worst = 0.0;
  for (const auto& in : six_inputs()) {
    const QtstOutcome outcome = run_qtst(in.state, 0.0, 0.0, NoiseParams{});
    worst = std::max(worst, std::abs(outcome.leak_prob - 0.016));
  }
  detail = fmt("max |leak - 0.016| = %.2e over six inputs", worst);
  return worst <= 1e-12;
}

bool criterion_7_oracle_equivalence(std::string& detail) {
  const NoiseParams np = NoiseParams::ideal();
  const double coherences[10] = {0.0,  0.1, 0.2,  0.35, 0.5,
                                 0.65, 0.8, 0.9,  0.95, 1.0};
  auto eng = make_engine(7001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PhotonState input = random_photon_state(eng);
    for (double c : coherences) {
      const double delay =
          c == 0.0 ? 100.0
                   : (c == 1.0 ? 0.0
                               : np.sigma_t_us * std::sqrt(-2.0 * std::log(c)));
      const QtstOutcome outcome = run_qtst(input, 0.0, delay, np);
      const DensityOperator oracle = closed_form_rho_n(
          input, coherence_factor(delay, np.sigma_t_us));
      worst = std::max(
          worst, max_abs_diff(outcome.rho_nuclear.matrix(), oracle.matrix()));
    }
  }
  detail = fmt("max |pipeline - closed form| = %.2e over 100 x 10 cases", worst);
  return worst < 1e-10;
}

bool criterion_8_bell_probability(std::string& detail) {
  const ComplexMatrix p = nv::bsm_projector(nv::StrainParams{}, /*ideal=*/true);
  auto eng = make_engine(8001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PhotonState psi = random_photon_state(eng);
    const DensityOperator joint(
        nv::full_layout(),
        kron(psi.ket().projector(), nv::bell_phi_plus_eN().projector()));
    worst = std::max(worst, std::abs(project(joint, p).probability - 0.25));
  }
  detail = fmt("max |P(herald) - 0.25| = %.2e over 100 random inputs", worst);
  return worst <= 1e-12;
}

bool criterion_9_tomography(std::string& detail) {
  auto eng = make_engine(9001);
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PureState psi = random_pure_state(2, eng);
    ComplexMatrix m3 = ComplexMatrix::Zero(3, 3);
    m3.topLeftCorner(2, 2) = psi.projector();
    const DensityOperator target(nv::nuclear_layout(), m3);
    std::vector<MeasurementRecord> records;
    for (int b = 0; b < 3; ++b) {
      records.push_back(simulate_counts(target, static_cast<PauliBasis>(b),
                                        100000, mix_seed(9100 + trial, b)));
    }
    if (trace_distance(qst(records).rho.matrix(), psi.projector()) <= 0.02) {
      ++hits;
    }
  }

  std::vector<PhotonState> inputs;
  std::vector<DensityOperator> outputs;
  for (const auto& in : six_inputs()) {
    inputs.push_back(in.state);
    ComplexMatrix m3 = ComplexMatrix::Zero(3, 3);
    m3.topLeftCorner(2, 2) = in.state.ket().projector();
    outputs.emplace_back(nv::nuclear_layout(), std::move(m3));
  }
  const double chi_ii = qpt(inputs, outputs).real_at(0, 0);
  detail = fmt("QST within 0.02 in %g/100 trials; identity chi_II = %.12f",
               static_cast<double>(hits), chi_ii);
  return hits >= 95 && std::abs(chi_ii - 1.0) <= 1e-10;
}

bool criterion_10_bootstrap_scaling(std::string& detail) {
  // Mixed, non-boundary state so the fidelity estimator is smooth.
  ComplexMatrix m3 = ComplexMatrix::Zero(3, 3);
  m3.topLeftCorner(2, 2) =
      0.9 * PhotonState::plus().ket().projector() + 0.05 * identity(2);
  const DensityOperator target(nv::nuclear_layout(), m3);
  const PureState goal = PhotonState::plus().nuclear_target();

  auto estimator = [&](const std::vector<MeasurementRecord>& records) {
    const QstResult res = qst(records);
    ComplexMatrix full = ComplexMatrix::Zero(3, 3);
    full.topLeftCorner(2, 2) = (1.0 - res.leak) * res.rho.matrix();
    full(2, 2) = res.leak;
    return state_fidelity(DensityOperator(nv::nuclear_layout(), full), goal);
  };

  const long long shots[3] = {1000, 10000, 100000};
  double scaled[3] = {};
  for (int s = 0; s < 3; ++s) {
    std::vector<MeasurementRecord> records;
    for (int b = 0; b < 3; ++b) {
      records.push_back(simulate_counts(target, static_cast<PauliBasis>(b),
                                        shots[s], mix_seed(10100 + s, b)));
    }
    const BootstrapResult res =
        bootstrap_errorbar(records, estimator, 400, mix_seed(10200, s));
    scaled[s] = res.stddev * std::sqrt(static_cast<double>(shots[s]));
  }
  const double lo = std::min({scaled[0], scaled[1], scaled[2]});
  const double hi = std::max({scaled[0], scaled[1], scaled[2]});
  detail = fmt("stddev * sqrt(shots) spread factor %.3f < 1.5 over 1e3..1e5",
               hi / lo);
  return hi / lo < 1.5;
}

bool criterion_11_rate_model(std::string& detail) {
  RateParams rp;
  rp.p_zpl = 0.03;
  const auto grid = linspace(0.0, 190.0, 20);
  const SweepResult result = rate_compare(grid, rp);
  double worst = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double eta = result.series[0].values[i];
    const double ratio =
        result.series[1].values[i] / result.series[2].values[i];
    worst = std::max(worst,
                     std::abs(ratio - 1.0 / (rp.p_zpl * std::sqrt(eta))) /
                         (1.0 / (rp.p_zpl * std::sqrt(eta))));
  }
  const double crossover = crossover_transmittance(rp);
  detail = fmt("max relative ratio error %.2e; crossover eta %.6e = p_zpl^2",
               worst, crossover);
  return worst < 1e-12 &&
         std::abs(crossover - rp.p_zpl * rp.p_zpl) < 1e-18;
}

bool criterion_12_determinism(std::string& detail) {
  const fs::path base = fs::temp_directory_path() / "qtst_acceptance";
  fs::remove_all(base);
  int compared = 0;
  for (const std::string& name : subcommand_names()) {
    for (long long shots : {0LL, 300LL}) {
      RunConfig cfg;
      cfg.shots = shots;
      cfg.resamples = 120;
      cfg.sweep.freq_points = 3;
      cfg.sweep.delay_points = 3;
      cfg.sweep.length_points = 3;

      const std::string tag = name + (shots == 0 ? "_exact" : "_sampled");
      cfg.out_dir = (base / (tag + "_a")).string();
      const RunOutput first = run_subcommand(name, cfg);
      cfg.out_dir = (base / (tag + "_b")).string();
      const RunOutput second = run_subcommand(name, cfg);

      for (size_t i = 0; i + 1 < first.files.size(); ++i) {  // CSVs only
        if (slurp(first.files[i]) != slurp(second.files[i])) {
          detail = "mismatch in " + first.files[i];
          return false;
        }
        ++compared;
      }
    }
  }
  fs::remove_all(base);
  detail = fmt("%g CSV files byte-identical across repeated runs",
               static_cast<double>(compared));
  return compared > 0;
}

}  // namespace

int main() {
  std::printf("qtst-sim acceptance suite (%s)\n", kRevision);
  run_criterion(1, 1.0, criterion_1_average_fidelity);
  run_criterion(2, 1.0, criterion_2_frequency_sweep);
  run_criterion(3, 1.0, criterion_3_arrival_time_sweep);
  run_criterion(4, 1.0, criterion_4_entanglement_decay);
  run_criterion(5, 1.0, criterion_5_strain_calibration);
  run_criterion(6, 0.0, criterion_6_spam_leak);
  run_criterion(7, 5.0, criterion_7_oracle_equivalence);
  run_criterion(8, 0.0, criterion_8_bell_probability);
  run_criterion(9, 60.0, criterion_9_tomography);
  run_criterion(10, 30.0, criterion_10_bootstrap_scaling);
  run_criterion(11, 0.0, criterion_11_rate_model);
  run_criterion(12, 0.0, criterion_12_determinism);

  if (g_failures == 0) {
    std::printf("all 12 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
