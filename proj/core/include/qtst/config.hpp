#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qtst/experiments.hpp"

namespace qtst {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sweep grids mirroring the default experimental ranges: detuning
/// +-100 MHz over 21 points, delay 0..3 us over 31 points, fiber length
/// 0..100 km over 21 points.
struct SweepGrids {
  double freq_span_mhz = 100.0;
  int freq_points = 21;
  double delay_max_us = 3.0;
  int delay_points = 31;
  double length_max_km = 100.0;
  int length_points = 21;

  std::vector<double> freq_grid() const;
  std::vector<double> delay_grid() const;
  std::vector<double> length_grid() const;
  void validate() const;
  bool operator==(const SweepGrids&) const = default;
};

struct RunConfig {
  NoiseParams noise;
  RateParams rates;
  SweepGrids sweep;
  long long shots = 0;  // 0 = exact mode
  std::uint64_t seed = 12345;
  int resamples = 200;
  std::string out_dir = "out";

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses a flat `key = value` configuration document with [noise],
/// [rates], [sweep], and [run] sections. Absent keys take the calibrated
/// defaults above; unknown sections or keys and out-of-range values are
/// rejected with line-numbered diagnostics naming the key path.
RunConfig parse_config(const std::string& text);

/// Canonical document listing every key; parse_config(serialize_config(c))
/// reproduces c exactly.
std::string serialize_config(const RunConfig& cfg);

/// Applies a single `section.key = value` override, e.g.
/// apply_override(cfg, "noise.p_spam", "0.02"). Validates the result.
void apply_override(RunConfig& cfg, const std::string& dotted_key,
                    const std::string& value);

}  // namespace qtst
