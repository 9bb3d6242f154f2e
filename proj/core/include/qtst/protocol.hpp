#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qtst/nv.hpp"
#include "qtst/ops.hpp"

namespace qtst {

/// Photon polarization qubit alpha|+1>_p + beta|-1>_p, normalized.
struct PhotonState {
  Complex alpha;
  Complex beta;

  PhotonState(Complex a, Complex b);

  PureState ket() const;             // dim 2 in the photon layout
  PureState nuclear_target() const;  // embedded in the nuclear qutrit

  static PhotonState plus_one();   // |+1>, right circular
  static PhotonState minus_one();  // |-1>, left circular
  static PhotonState plus();       // (|+1>+|-1>)/sqrt(2), horizontal
  static PhotonState minus();      // (|+1>-|-1>)/sqrt(2), vertical
  static PhotonState plus_i();     // (|+1>+i|-1>)/sqrt(2), diagonal
  static PhotonState minus_i();    // (|+1>-i|-1>)/sqrt(2), anti-diagonal
};

struct LabeledInput {
  std::string label;
  PhotonState state;
};

/// The six canonical input polarizations, in order +1, -1, +, -, +i, -i.
const std::vector<LabeledInput>& six_inputs();

struct NoiseParams {
  double sigma_f_mhz = 61.0;    // herald lineshape width (spectral diffusion)
  double sigma_t_us = 0.98;     // Gaussian decay scale of the e-N coherence
  double p_spam = 0.016;        // SPAM leakage into |0>_N
  double prep_fidelity = 0.97;  // prepared Bell-state fidelity
  double herald_scale = 0.1;    // per-attempt herald normalization kappa
  nv::StrainParams strain{};

  /// No prep error, no SPAM, no strain; herald scale kept at 0.1.
  static NoiseParams ideal();

  void validate() const;
  bool operator==(const NoiseParams&) const = default;
};

struct QtstOutcome {
  double herald_prob = 0.0;
  DensityOperator rho_nuclear;  // dim 3, post feed-forward and SPAM
  double leak_prob = 0.0;       // <0|rho_nuclear|0>
};

/// Raised when the Bell projection leaves no state to condition on.
class NoHeraldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prepared electron-nuclear state: F |Phi+><Phi+| + (1-F) |Phi-><Phi-|
/// with F = prep_fidelity, zero population on |0>_N.
DensityOperator prepare_entangled(const NoiseParams& np);

/// Gaussian coherence decay C(t) = exp(-t^2 / (2 sigma_t^2)).
double coherence_factor(double t_us, double sigma_t_us);

/// Scales the Phi+/Phi- coherence of an e-N state by coherence_factor,
/// via the electron dephasing channel.
DensityOperator dephase_eN(const DensityOperator& rho, double t_us,
                           const NoiseParams& np);

/// kappa * exp(-Delta^2/(2 sigma_f^2)) * 4 Tr(P rho P), with P the strained
/// Bell-measurement projector. The factor 4 normalizes the ideal Bell
/// success probability of 1/4 to 1, so an ideal zero-detuning attempt
/// heralds with probability kappa.
double herald_probability(double detuning_mhz, const DensityOperator& joint,
                          const NoiseParams& np);

/// sigma_x on the {|+1>,|-1>}_N subspace, identity on |0>_N.
DensityOperator feed_forward(const DensityOperator& rho_n);

/// (1 - p_spam) rho + p_spam |0>_N<0|.
DensityOperator apply_spam(const DensityOperator& rho_n, double p_spam);

/// Full deterministic pipeline: prepare -> dephase(delay) -> absorb/project
/// -> trace to the nuclear spin -> feed-forward -> SPAM. No sampling; the
/// returned herald_prob is the exact per-attempt probability.
QtstOutcome run_qtst(const PhotonState& input, double detuning_mhz,
                     double delay_us, const NoiseParams& np);

/// Analytic post-feed-forward nuclear state for coherence C:
/// |a|^2 |+1><+1| + |b|^2 |-1><-1| + C (a b* |+1><-1| + h.c.),
/// embedded in the qutrit with zero |0>_N population.
DensityOperator closed_form_rho_n(const PhotonState& input, double coherence);

}  // namespace qtst
