#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace qtst {

/// Generator identifier recorded in run metadata. The engine is the
/// standard-specified mt19937_64; independent substreams are derived by
/// passing (seed, stream index) through the splitmix64 finalizer.
inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64";

/// splitmix64 mix of a (seed, stream) pair into a fresh engine seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_engine(std::uint64_t seed,
                                   std::uint64_t stream = 0) {
  return std::mt19937_64(mix_seed(seed, stream));
}

/// Uniform double in [0, 1) with 53 random bits. Built from raw engine
/// output so sequences are identical across platforms and libraries.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Multinomial draw via per-shot inverse CDF. Probabilities must be
/// nonnegative; they are normalized by their sum.
inline std::vector<long long> multinomial_draw(std::mt19937_64& eng,
                                               long long shots,
                                               std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("multinomial_draw: no outcomes");
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("multinomial_draw: negative probability");
    total += p;
  }
  if (total <= 0.0) throw std::invalid_argument("multinomial_draw: zero total probability");

  std::vector<long long> counts(probs.size(), 0);
  for (long long s = 0; s < shots; ++s) {
    const double u = uniform01(eng) * total;
    double cum = 0.0;
    size_t pick = probs.size() - 1;  // guard against rounding at the tail
    for (size_t i = 0; i < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) {
        pick = i;
        break;
      }
    }
    ++counts[pick];
  }
  return counts;
}

/// Binomial draw as a two-outcome multinomial.
inline long long binomial_draw(std::mt19937_64& eng, long long shots,
                               double p) {
  long long k = 0;
  for (long long s = 0; s < shots; ++s) {
    if (uniform01(eng) < p) ++k;
  }
  return k;
}

}  // namespace qtst
