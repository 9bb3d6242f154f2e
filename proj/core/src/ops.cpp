#include "qtst/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtst {
namespace {

constexpr double kProjectorTol = 1e-10;

std::vector<int> subsystem_dims(const HilbertLayout& layout) {
  std::vector<int> dims;
  dims.reserve(layout.subsystems().size());
  for (const auto& s : layout.subsystems()) dims.push_back(s.dim);
  return dims;
}

// Decomposes a composite index into mixed-radix digits, most significant
// subsystem first (matching the layout convention).
void decompose(int index, const std::vector<int>& dims, std::vector<int>& out) {
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    out[i] = index % dims[i];
    index /= dims[i];
  }
}

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep) {
  const auto& layout = rho.layout();
  const auto dims = subsystem_dims(layout);
  const int n = static_cast<int>(dims.size());

  std::vector<char> kept(n, 0);
  for (const auto& label : keep) kept[layout.position_of(label)] = 1;

  std::vector<Subsystem> kept_subs;
  std::vector<int> kept_pos, traced_pos;
  for (int i = 0; i < n; ++i) {
    if (kept[i]) {
      kept_subs.push_back(layout.subsystems()[i]);
      kept_pos.push_back(i);
    } else {
      traced_pos.push_back(i);
    }
  }

  std::vector<int> kept_dims, traced_dims;
  int kept_total = 1, traced_total = 1;
  for (int p : kept_pos) {
    kept_dims.push_back(dims[p]);
    kept_total *= dims[p];
  }
  for (int p : traced_pos) {
    traced_dims.push_back(dims[p]);
    traced_total *= dims[p];
  }

  // Strides of each subsystem in the full composite index.
  std::vector<int> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  std::vector<int> kd(kept_pos.size()), td(traced_pos.size());
  auto full_index = [&](const std::vector<int>& kdigits,
                        const std::vector<int>& tdigits) {
    int idx = 0;
    for (size_t i = 0; i < kept_pos.size(); ++i) idx += kdigits[i] * stride[kept_pos[i]];
    for (size_t i = 0; i < traced_pos.size(); ++i) idx += tdigits[i] * stride[traced_pos[i]];
    return idx;
  };

  ComplexMatrix out = ComplexMatrix::Zero(kept_total, kept_total);
  std::vector<int> kd_row(kept_pos.size()), kd_col(kept_pos.size());
  for (int r = 0; r < kept_total; ++r) {
    decompose(r, kept_dims, kd_row);
    for (int c = 0; c < kept_total; ++c) {
      decompose(c, kept_dims, kd_col);
      Complex sum = 0.0;
      for (int t = 0; t < traced_total; ++t) {
        decompose(t, traced_dims, td);
        sum += rho.matrix()(full_index(kd_row, td), full_index(kd_col, td));
      }
      out(r, c) = sum;
    }
  }
  return DensityOperator(HilbertLayout(std::move(kept_subs)), std::move(out));
}

ProjectionResult project(const DensityOperator& rho,
                         const ComplexMatrix& projector) {
  const int d = rho.dim();
  if (projector.rows() != d || projector.cols() != d) {
    throw std::invalid_argument("project: projector dim does not match state");
  }
  if (max_abs_diff(projector, projector.adjoint()) > kProjectorTol ||
      max_abs_diff(projector * projector, projector) > kProjectorTol) {
    throw std::invalid_argument("project: operator is not a projector");
  }
  ComplexMatrix post = projector * rho.matrix() * projector;
  double prob = post.trace().real();
  prob = std::clamp(prob, 0.0, 1.0);
  if (prob < kNoHeraldThreshold) {
    return ProjectionResult{prob, std::nullopt};
  }
  post /= prob;
  post = ((post + post.adjoint().eval()) / 2.0).eval();
  return ProjectionResult{prob, DensityOperator(rho.layout(), std::move(post))};
}

double state_fidelity(const DensityOperator& rho, const PureState& psi) {
  if (psi.dim() != rho.dim()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  const Complex value =
      (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0);
  return std::clamp(value.real(), 0.0, 1.0);
}

DensityOperator apply_channel(const DensityOperator& rho,
                              const QuantumChannel& ch,
                              const std::vector<std::string>& on) {
  const auto& layout = rho.layout();
  const auto dims = subsystem_dims(layout);
  const int n = static_cast<int>(dims.size());
  const int d = layout.total_dim();

  std::vector<char> targeted(n, 0);
  for (const auto& label : on) targeted[layout.position_of(label)] = 1;

  std::vector<int> target_pos;
  int target_dim = 1;
  for (int i = 0; i < n; ++i) {
    if (targeted[i]) {
      target_pos.push_back(i);
      target_dim *= dims[i];
    }
  }
  if (target_dim != ch.dim()) {
    throw std::invalid_argument("apply_channel: channel dim does not match targeted subsystems");
  }

  // Precompute, for every full-space index, its target sub-index and the
  // residual index over the untouched subsystems.
  std::vector<int> target_of(d), rest_of(d), digits(n);
  for (int i = 0; i < d; ++i) {
    decompose(i, dims, digits);
    int t = 0, r = 0;
    for (int s = 0; s < n; ++s) {
      if (targeted[s]) {
        t = t * dims[s] + digits[s];
      } else {
        r = r * dims[s] + digits[s];
      }
    }
    target_of[i] = t;
    rest_of[i] = r;
  }

  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  ComplexMatrix k_full(d, d);
  for (const auto& k : ch.kraus_ops()) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        k_full(i, j) = (rest_of[i] == rest_of[j])
                           ? k(target_of[i], target_of[j])
                           : Complex(0.0);
      }
    }
    out += k_full * rho.matrix() * k_full.adjoint();
  }
  out = ((out + out.adjoint().eval()) / 2.0).eval();
  return DensityOperator(layout, std::move(out));
}

QuantumChannel dephasing_channel(double coherence) {
  if (!(coherence >= 0.0 && coherence <= 1.0)) {
    throw std::invalid_argument("dephasing_channel: coherence must be in [0, 1]");
  }
  ComplexMatrix k0 = std::sqrt((1.0 + coherence) / 2.0) * identity(2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  const double w = std::sqrt((1.0 - coherence) / 2.0);
  k1(0, 0) = w;
  k1(1, 1) = -w;
  return QuantumChannel({std::move(k0), std::move(k1)});
}

}  // namespace qtst
