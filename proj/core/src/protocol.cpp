#include "qtst/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace qtst {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ComplexMatrix nuclear_sigma_x3() {
  ComplexMatrix x = ComplexMatrix::Zero(3, 3);
  x(0, 1) = x(1, 0) = 1.0;
  x(2, 2) = 1.0;
  return x;
}

}  // namespace

PhotonState::PhotonState(Complex a, Complex b) : alpha(a), beta(b) {
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > kNormTol) {
    throw std::invalid_argument("PhotonState: |alpha|^2 + |beta|^2 must be 1");
  }
}

PureState PhotonState::ket() const {
  ComplexVector v(2);
  v << alpha, beta;
  return PureState(std::move(v));
}

PureState PhotonState::nuclear_target() const {
  ComplexVector v = ComplexVector::Zero(3);
  v(0) = alpha;
  v(1) = beta;
  return PureState(std::move(v));
}

PhotonState PhotonState::plus_one() { return {1.0, 0.0}; }
PhotonState PhotonState::minus_one() { return {0.0, 1.0}; }
PhotonState PhotonState::plus() { return {kInvSqrt2, kInvSqrt2}; }
PhotonState PhotonState::minus() { return {kInvSqrt2, -kInvSqrt2}; }
PhotonState PhotonState::plus_i() { return {kInvSqrt2, Complex(0.0, kInvSqrt2)}; }
PhotonState PhotonState::minus_i() { return {kInvSqrt2, Complex(0.0, -kInvSqrt2)}; }

const std::vector<LabeledInput>& six_inputs() {
  static const std::vector<LabeledInput> inputs = {
      {"+1", PhotonState::plus_one()}, {"-1", PhotonState::minus_one()},
      {"+", PhotonState::plus()},      {"-", PhotonState::minus()},
      {"+i", PhotonState::plus_i()},   {"-i", PhotonState::minus_i()},
  };
  return inputs;
}

NoiseParams NoiseParams::ideal() {
  NoiseParams np;
  np.p_spam = 0.0;
  np.prep_fidelity = 1.0;
  np.strain.delta_perp_ghz = 0.0;
  return np;
}

void NoiseParams::validate() const {
  auto probability = [](double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(key) + ": must be in [0, 1]");
    }
  };
  probability(p_spam, "noise.p_spam");
  probability(prep_fidelity, "noise.prep_fidelity");
  probability(herald_scale, "noise.herald_scale");
  if (!(sigma_f_mhz > 0.0)) {
    throw std::invalid_argument("noise.sigma_f_mhz: must be > 0");
  }
  if (!(sigma_t_us > 0.0)) {
    throw std::invalid_argument("noise.sigma_t_us: must be > 0");
  }
  strain.validate();
}

DensityOperator prepare_entangled(const NoiseParams& np) {
  np.validate();
  const double f = np.prep_fidelity;
  ComplexMatrix m = f * nv::bell_phi_plus_eN().projector() +
                    (1.0 - f) * nv::bell_phi_minus_eN().projector();
  return DensityOperator(nv::electron_nuclear_layout(), std::move(m));
}

double coherence_factor(double t_us, double sigma_t_us) {
  if (!(t_us >= 0.0)) {
    throw std::invalid_argument("coherence_factor: t must be >= 0");
  }
  if (!(sigma_t_us > 0.0)) {
    throw std::invalid_argument("coherence_factor: sigma_t must be > 0");
  }
  return std::exp(-(t_us * t_us) / (2.0 * sigma_t_us * sigma_t_us));
}

DensityOperator dephase_eN(const DensityOperator& rho, double t_us,
                           const NoiseParams& np) {
  const double c = coherence_factor(t_us, np.sigma_t_us);
  return apply_channel(rho, dephasing_channel(c), {"electron"});
}

double herald_probability(double detuning_mhz, const DensityOperator& joint,
                          const NoiseParams& np) {
  np.validate();
  const ComplexMatrix p = nv::bsm_projector(np.strain, /*ideal=*/false);
  if (p.rows() != joint.dim()) {
    throw std::invalid_argument("herald_probability: joint state must live on photon x electron x nuclear");
  }
  const double success = (p * joint.matrix() * p).trace().real();
  const double ratio = detuning_mhz / np.sigma_f_mhz;
  const double lineshape = std::exp(-0.5 * ratio * ratio);
  return std::clamp(np.herald_scale * lineshape * 4.0 * success, 0.0, 1.0);
}

DensityOperator feed_forward(const DensityOperator& rho_n) {
  if (rho_n.dim() != 3) {
    throw std::invalid_argument("feed_forward: expected the nuclear qutrit");
  }
  const ComplexMatrix x = nuclear_sigma_x3();
  return DensityOperator(rho_n.layout(), x * rho_n.matrix() * x);
}

DensityOperator apply_spam(const DensityOperator& rho_n, double p_spam) {
  if (!(p_spam >= 0.0 && p_spam <= 1.0)) {
    throw std::invalid_argument("apply_spam: p_spam must be in [0, 1]");
  }
  if (rho_n.dim() != 3) {
    throw std::invalid_argument("apply_spam: expected the nuclear qutrit");
  }
  ComplexMatrix leak = ComplexMatrix::Zero(3, 3);
  leak(2, 2) = 1.0;
  ComplexMatrix m = (1.0 - p_spam) * rho_n.matrix() + p_spam * leak;
  return DensityOperator(rho_n.layout(), std::move(m));
}

QtstOutcome run_qtst(const PhotonState& input, double detuning_mhz,
                     double delay_us, const NoiseParams& np) {
  np.validate();
  DensityOperator rho_en = dephase_eN(prepare_entangled(np), delay_us, np);

  const ComplexMatrix joint_m =
      kron(input.ket().projector(), rho_en.matrix());
  const DensityOperator joint(nv::full_layout(), joint_m);

  const double herald = herald_probability(detuning_mhz, joint, np);

  const ComplexMatrix p = nv::bsm_projector(np.strain, /*ideal=*/false);
  const ProjectionResult branch = project(joint, p);
  if (!branch.post) {
    throw NoHeraldError("run_qtst: projection probability is zero, no heralded state");
  }

  DensityOperator rho_n = partial_trace(*branch.post, {"nuclear"});
  rho_n = feed_forward(rho_n);
  rho_n = apply_spam(rho_n, np.p_spam);
  const double leak = rho_n.matrix()(2, 2).real();
  return QtstOutcome{herald, std::move(rho_n), leak};
}

DensityOperator closed_form_rho_n(const PhotonState& input, double coherence) {
  if (!(coherence >= 0.0 && coherence <= 1.0)) {
    throw std::invalid_argument("closed_form_rho_n: coherence must be in [0, 1]");
  }
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = std::norm(input.alpha);
  m(1, 1) = std::norm(input.beta);
  m(0, 1) = coherence * input.alpha * std::conj(input.beta);
  m(1, 0) = std::conj(m(0, 1));
  return DensityOperator(nv::nuclear_layout(), std::move(m));
}

}  // namespace qtst
