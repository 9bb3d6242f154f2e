#pragma once

#include <optional>
#include <vector>

#include "qtst/hilbert.hpp"

namespace qtst {

/// Probability floor below which a projection is reported as "no herald"
/// and no post-measurement state is produced.
inline constexpr double kNoHeraldThreshold = 1e-15;

struct ProjectionResult {
  double probability = 0.0;             // Tr(P rho P), clamped to [0, 1]
  std::optional<DensityOperator> post;  // absent when probability < 1e-15
};

/// Reduced operator on the kept subsystems. The result keeps the layout
/// order of the original, regardless of the order of `keep`.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);

/// Projective measurement branch. `projector` must satisfy P^2 = P and
/// P = P^dag within 1e-10.
ProjectionResult project(const DensityOperator& rho,
                         const ComplexMatrix& projector);

/// <psi|rho|psi>, clamped to [0, 1].
double state_fidelity(const DensityOperator& rho, const PureState& psi);

/// Applies `ch` to the subsystems named in `on` (tensor factor order is the
/// layout order of those subsystems), identity on the rest.
DensityOperator apply_channel(const DensityOperator& rho,
                              const QuantumChannel& ch,
                              const std::vector<std::string>& on);

/// Single-qubit phase-flip pair {sqrt((1+c)/2) I, sqrt((1-c)/2) Z}. Applied
/// to one member of a Bell pair it scales the Phi+/Phi- coherence by c;
/// c = 1 is the identity, c = 0 fully decoheres into the Bell mixture.
QuantumChannel dephasing_channel(double coherence);

}  // namespace qtst
