#include "qtst/nv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtst::nv {
namespace {

constexpr double kClusterTol = 1e-9;   // eigenvalue grouping, GHz
constexpr double kBranchTieTol = 1e-9; // ambiguous-branch detection

Subsystem photon_sub() { return {"photon", 2, {"+1", "-1"}}; }
Subsystem electron_sub() { return {"electron", 2, {"+1", "-1"}}; }
Subsystem nuclear_sub() { return {"nuclear", 3, {"+1", "-1", "0"}}; }

// Multiplies by a global phase making the largest-magnitude amplitude real
// positive (ties broken by lowest index).
ComplexVector fix_phase(ComplexVector v) {
  int best = 0;
  double best_mag = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best_mag + 1e-15) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag > 0.0) v *= std::conj(v(best)) / best_mag;
  return v;
}

// |Psi+> written in the manifold basis (|E+,-1>, |E-,+1>, |E+,+1>, |E-,-1>):
// equal weight on the first two components.
ComplexVector psi_plus_manifold() {
  ComplexVector seed = ComplexVector::Zero(4);
  seed(0) = seed(1) = 1.0 / std::sqrt(2.0);
  return seed;
}

struct Cluster {
  double energy = 0.0;
  std::vector<ComplexVector> basis;   // orthonormal, seeded ordering
  double seed_overlap_sq = 0.0;       // |P_cluster |Psi+>|^2
  ComplexVector seed_projection;      // normalized when overlap > 0
};

std::vector<Cluster> clustered_eigenbasis(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("excited_hamiltonian: diagonalization failed");
  }
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  const ComplexVector seed = psi_plus_manifold();

  std::vector<Cluster> clusters;
  for (int i = 0; i < evals.size();) {
    int j = i;
    while (j + 1 < evals.size() &&
           evals(j + 1) - evals(i) < kClusterTol * scale) {
      ++j;
    }
    Cluster c;
    c.energy = evals(i);
    // Projection of the seed onto the eigenspace.
    ComplexVector proj = ComplexVector::Zero(evals.size());
    for (int k = i; k <= j; ++k) {
      proj += evecs.col(k) * (evecs.col(k).dot(seed));
    }
    c.seed_overlap_sq = proj.squaredNorm();
    if (c.seed_overlap_sq > 1e-12) {
      c.seed_projection = fix_phase(proj / proj.norm());
      c.basis.push_back(c.seed_projection);
      // Complete with the original vectors, Gram-Schmidt against what is
      // already in the basis.
      for (int k = i; k <= j && static_cast<int>(c.basis.size()) < j - i + 1;
           ++k) {
        ComplexVector w = evecs.col(k);
        for (const auto& b : c.basis) w -= b * (b.dot(w));
        if (w.norm() > 1e-8) c.basis.push_back(fix_phase(w / w.norm()));
      }
    } else {
      for (int k = i; k <= j; ++k) c.basis.push_back(fix_phase(evecs.col(k)));
    }
    clusters.push_back(std::move(c));
    i = j + 1;
  }
  return clusters;
}

}  // namespace

HilbertLayout photon_layout() { return HilbertLayout({photon_sub()}); }
HilbertLayout electron_layout() { return HilbertLayout({electron_sub()}); }
HilbertLayout nuclear_layout() { return HilbertLayout({nuclear_sub()}); }
HilbertLayout nuclear_qubit_layout() {
  return HilbertLayout({{"nuclear", 2, {"+1", "-1"}}});
}
HilbertLayout photon_electron_layout() {
  return HilbertLayout({photon_sub(), electron_sub()});
}
HilbertLayout electron_nuclear_layout() {
  return HilbertLayout({electron_sub(), nuclear_sub()});
}
HilbertLayout full_layout() {
  return HilbertLayout({photon_sub(), electron_sub(), nuclear_sub()});
}

void StrainParams::validate() const {
  if (!(delta_perp_ghz >= 0.0)) {
    throw std::invalid_argument("strain.delta_perp_ghz: must be >= 0");
  }
  if (!(lambda_so_ghz > 0.0)) {
    throw std::invalid_argument("strain.lambda_so_ghz: must be > 0");
  }
}

PureState bell_phi_plus_eN() {
  ComplexVector v = ComplexVector::Zero(6);
  v(0) = v(4) = 1.0 / std::sqrt(2.0);  // |+1,+1> and |-1,-1>
  return PureState(std::move(v));
}

PureState bell_phi_minus_eN() {
  ComplexVector v = ComplexVector::Zero(6);
  v(0) = 1.0 / std::sqrt(2.0);
  v(4) = -1.0 / std::sqrt(2.0);
  return PureState(std::move(v));
}

PureState psi_plus_pe() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = v(2) = 1.0 / std::sqrt(2.0);  // |+1,-1> and |-1,+1>
  return PureState(std::move(v));
}

namespace {

ComplexMatrix manifold_hamiltonian(const StrainParams& sp) {
  // Basis (|E+,-1>, |E-,+1>, |E+,+1>, |E-,-1>):
  // sigma_z(orb) x sigma_z(spin) is diag(-1,-1,+1,+1); sigma_x(orb) x I
  // couples 0<->3 and 1<->2 (orbital flip at fixed spin).
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 0) = h(1, 1) = -sp.lambda_so_ghz;
  h(2, 2) = h(3, 3) = sp.lambda_so_ghz;
  h(0, 3) = h(3, 0) = sp.delta_perp_ghz;
  h(1, 2) = h(2, 1) = sp.delta_perp_ghz;
  return h;
}

}  // namespace

ExcitedManifold excited_hamiltonian(const StrainParams& sp) {
  sp.validate();
  ExcitedManifold manifold;
  manifold.hamiltonian = manifold_hamiltonian(sp);
  for (const auto& cluster : clustered_eigenbasis(manifold.hamiltonian)) {
    for (const auto& vec : cluster.basis) {
      manifold.eigenpairs.emplace_back(cluster.energy,
                                       PureState::normalized(vec));
    }
  }
  return manifold;
}

PureState strained_a2(const StrainParams& sp) {
  sp.validate();
  auto clusters = clustered_eigenbasis(manifold_hamiltonian(sp));

  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) {
              return a.seed_overlap_sq > b.seed_overlap_sq;
            });
  if (clusters.empty() || clusters.front().seed_overlap_sq <= 1e-12) {
    throw std::runtime_error("strained_a2: no branch overlaps |Psi+>");
  }
  if (clusters.size() > 1 &&
      clusters[0].seed_overlap_sq - clusters[1].seed_overlap_sq <
          kBranchTieTol) {
    throw std::runtime_error(
        "strained_a2: ambiguous branch (degenerate maximal overlap)");
  }

  // Manifold basis -> photon x electron basis via the selection rule:
  // |E+,-1> -> |+1,-1> (1), |E-,+1> -> |-1,+1> (2),
  // |E+,+1> -> |+1,+1> (0), |E-,-1> -> |-1,-1> (3).
  static constexpr int kToPe[4] = {1, 2, 0, 3};
  const ComplexVector& a2 = clusters.front().seed_projection;
  ComplexVector pe = ComplexVector::Zero(4);
  for (int i = 0; i < 4; ++i) pe(kToPe[i]) = a2(i);
  return PureState::normalized(fix_phase(std::move(pe)));
}

ComplexMatrix bsm_projector(const StrainParams& sp, bool ideal) {
  const PureState a2 = ideal ? psi_plus_pe() : strained_a2(sp);
  return kron(a2.projector(), identity(3));
}

}  // namespace qtst::nv
