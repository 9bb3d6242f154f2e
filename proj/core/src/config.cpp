#include "qtst/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace qtst {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Strips optional surrounding double quotes from a string value.
std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
  }
  return v;
}

// One assignment per known key. Range checking happens in validate().
void apply_key(RunConfig& cfg, const std::string& section,
               const std::string& key, const std::string& value) {
  const std::string path = section + "." + key;
  if (section == "noise") {
    if (key == "sigma_f_mhz") cfg.noise.sigma_f_mhz = parse_double(path, value);
    else if (key == "sigma_t_us") cfg.noise.sigma_t_us = parse_double(path, value);
    else if (key == "p_spam") cfg.noise.p_spam = parse_double(path, value);
    else if (key == "prep_fidelity") cfg.noise.prep_fidelity = parse_double(path, value);
    else if (key == "herald_scale") cfg.noise.herald_scale = parse_double(path, value);
    else if (key == "delta_perp_ghz") cfg.noise.strain.delta_perp_ghz = parse_double(path, value);
    else if (key == "lambda_so_ghz") cfg.noise.strain.lambda_so_ghz = parse_double(path, value);
    else throw ConfigError("unknown key '" + path + "'");
  } else if (section == "rates") {
    if (key == "p_zpl") cfg.rates.p_zpl = parse_double(path, value);
    else if (key == "attenuation_db_per_km") cfg.rates.attenuation_db_per_km = parse_double(path, value);
    else if (key == "repetition_rate_hz") cfg.rates.repetition_rate_hz = parse_double(path, value);
    else throw ConfigError("unknown key '" + path + "'");
  } else if (section == "sweep") {
    if (key == "freq_span_mhz") cfg.sweep.freq_span_mhz = parse_double(path, value);
    else if (key == "freq_points") cfg.sweep.freq_points = static_cast<int>(parse_int(path, value));
    else if (key == "delay_max_us") cfg.sweep.delay_max_us = parse_double(path, value);
    else if (key == "delay_points") cfg.sweep.delay_points = static_cast<int>(parse_int(path, value));
    else if (key == "length_max_km") cfg.sweep.length_max_km = parse_double(path, value);
    else if (key == "length_points") cfg.sweep.length_points = static_cast<int>(parse_int(path, value));
    else throw ConfigError("unknown key '" + path + "'");
  } else if (section == "run") {
    if (key == "shots") cfg.shots = parse_int(path, value);
    else if (key == "seed") cfg.seed = parse_uint(path, value);
    else if (key == "resamples") cfg.resamples = static_cast<int>(parse_int(path, value));
    else if (key == "out_dir") cfg.out_dir = unquote(value);
    else throw ConfigError("unknown key '" + path + "'");
  } else {
    throw ConfigError("unknown section '[" + section + "]'");
  }
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> SweepGrids::freq_grid() const {
  return linspace(-freq_span_mhz, freq_span_mhz, freq_points);
}

std::vector<double> SweepGrids::delay_grid() const {
  return linspace(0.0, delay_max_us, delay_points);
}

std::vector<double> SweepGrids::length_grid() const {
  return linspace(0.0, length_max_km, length_points);
}

void SweepGrids::validate() const {
  if (!(freq_span_mhz > 0.0)) throw ConfigError("sweep.freq_span_mhz: must be > 0");
  if (freq_points < 1) throw ConfigError("sweep.freq_points: must be >= 1");
  if (!(delay_max_us > 0.0)) throw ConfigError("sweep.delay_max_us: must be > 0");
  if (delay_points < 1) throw ConfigError("sweep.delay_points: must be >= 1");
  if (!(length_max_km > 0.0)) throw ConfigError("sweep.length_max_km: must be > 0");
  if (length_points < 1) throw ConfigError("sweep.length_points: must be >= 1");
}

void RunConfig::validate() const {
  try {
    noise.validate();
    rates.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  sweep.validate();
  if (shots < 0) throw ConfigError("run.shots: must be >= 0");
  if (resamples < 100) throw ConfigError("run.resamples: must be >= 100");
  if (out_dir.empty()) throw ConfigError("run.out_dir: must not be empty");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> key_lines;
  std::string section;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "noise" && section != "rates" && section != "sweep" &&
          section != "run") {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section '[" + section + "]'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' appears before any section header");
    }

    const std::string path = section + "." + key;
    if (key_lines.count(path) != 0) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        path + "' (first set on line " +
                        std::to_string(key_lines[path]) + ")");
    }
    key_lines[path] = line_no;

    try {
      apply_key(cfg, section, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Attach the defining line when the offending key was set explicitly.
    const std::string what = e.what();
    const auto colon = what.find(':');
    const std::string path = colon == std::string::npos ? "" : what.substr(0, colon);
    if (auto it = key_lines.find(path); it != key_lines.end()) {
      throw ConfigError("line " + std::to_string(it->second) + ": " + what);
    }
    throw;
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[noise]\n";
  os << "sigma_f_mhz = " << format_value(cfg.noise.sigma_f_mhz) << "\n";
  os << "sigma_t_us = " << format_value(cfg.noise.sigma_t_us) << "\n";
  os << "p_spam = " << format_value(cfg.noise.p_spam) << "\n";
  os << "prep_fidelity = " << format_value(cfg.noise.prep_fidelity) << "\n";
  os << "herald_scale = " << format_value(cfg.noise.herald_scale) << "\n";
  os << "delta_perp_ghz = " << format_value(cfg.noise.strain.delta_perp_ghz) << "\n";
  os << "lambda_so_ghz = " << format_value(cfg.noise.strain.lambda_so_ghz) << "\n";
  os << "\n[rates]\n";
  os << "p_zpl = " << format_value(cfg.rates.p_zpl) << "\n";
  os << "attenuation_db_per_km = " << format_value(cfg.rates.attenuation_db_per_km) << "\n";
  os << "repetition_rate_hz = " << format_value(cfg.rates.repetition_rate_hz) << "\n";
  os << "\n[sweep]\n";
  os << "freq_span_mhz = " << format_value(cfg.sweep.freq_span_mhz) << "\n";
  os << "freq_points = " << cfg.sweep.freq_points << "\n";
  os << "delay_max_us = " << format_value(cfg.sweep.delay_max_us) << "\n";
  os << "delay_points = " << cfg.sweep.delay_points << "\n";
  os << "length_max_km = " << format_value(cfg.sweep.length_max_km) << "\n";
  os << "length_points = " << cfg.sweep.length_points << "\n";
  os << "\n[run]\n";
  os << "shots = " << cfg.shots << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "resamples = " << cfg.resamples << "\n";
  os << "out_dir = \"" << cfg.out_dir << "\"\n";
  return os.str();
}

void apply_override(RunConfig& cfg, const std::string& dotted_key,
                    const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw ConfigError("override key must be 'section.key', got '" +
                      dotted_key + "'");
  }
  apply_key(cfg, trim(dotted_key.substr(0, dot)),
            trim(dotted_key.substr(dot + 1)), trim(value));
  cfg.validate();
}

}  // namespace qtst
