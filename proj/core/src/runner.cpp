#include "qtst/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qtst/rng.hpp"
#include "qtst/version.hpp"

namespace qtst {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

struct CsvColumn {
  std::string value_name;
  std::string stddev_name;  // empty: no stddev column for this series
};

// One row per axis point; series s contributes columns[s].
std::string sweep_csv(const SweepResult& result, const std::string& axis_column,
                      const std::vector<CsvColumn>& columns) {
  std::string out = axis_column;
  for (size_t s = 0; s < result.series.size(); ++s) {
    out += "," + columns[s].value_name;
    if (!columns[s].stddev_name.empty()) out += "," + columns[s].stddev_name;
  }
  out += "\n";
  for (size_t i = 0; i < result.axis.size(); ++i) {
    out += format_number(result.axis[i]);
    for (size_t s = 0; s < result.series.size(); ++s) {
      out += "," + format_number(result.series[s].values[i]);
      if (!columns[s].stddev_name.empty()) {
        out += "," + format_number(result.series[s].stddevs[i]);
      }
    }
    out += "\n";
  }
  return out;
}

json config_json(const RunConfig& cfg) {
  return json{
      {"noise",
       {{"sigma_f_mhz", cfg.noise.sigma_f_mhz},
        {"sigma_t_us", cfg.noise.sigma_t_us},
        {"p_spam", cfg.noise.p_spam},
        {"prep_fidelity", cfg.noise.prep_fidelity},
        {"herald_scale", cfg.noise.herald_scale},
        {"delta_perp_ghz", cfg.noise.strain.delta_perp_ghz},
        {"lambda_so_ghz", cfg.noise.strain.lambda_so_ghz}}},
      {"rates",
       {{"p_zpl", cfg.rates.p_zpl},
        {"attenuation_db_per_km", cfg.rates.attenuation_db_per_km},
        {"repetition_rate_hz", cfg.rates.repetition_rate_hz}}},
      {"sweep",
       {{"freq_span_mhz", cfg.sweep.freq_span_mhz},
        {"freq_points", cfg.sweep.freq_points},
        {"delay_max_us", cfg.sweep.delay_max_us},
        {"delay_points", cfg.sweep.delay_points},
        {"length_max_km", cfg.sweep.length_max_km},
        {"length_points", cfg.sweep.length_points}}},
      {"run",
       {{"shots", cfg.shots},
        {"seed", cfg.seed},
        {"resamples", cfg.resamples},
        {"out_dir", cfg.out_dir}}},
  };
}

void write_metadata(const fs::path& dir, const std::string& stem,
                    const std::string& subcommand, const RunConfig& cfg,
                    const std::vector<std::string>& outputs,
                    RunOutput& run_output, const json& extra = json::object()) {
  json meta{
      {"tool", kToolName},
      {"version", kVersion},
      {"revision", kRevision},
      {"rng", kRngAlgorithm},
      {"subcommand", subcommand},
      {"config", config_json(cfg)},
      {"outputs", outputs},
  };
  meta.update(extra);
  const fs::path path = dir / (stem + "_meta.json");
  write_file(path, meta.dump(2) + "\n");
  run_output.files.push_back(path.string());
}

void emit_sweep(const fs::path& dir, const std::string& stem,
                const std::string& axis_column, const SweepResult& result,
                const std::vector<CsvColumn>& columns,
                const std::string& subcommand, const RunConfig& cfg,
                RunOutput& out) {
  const fs::path csv_path = dir / (stem + ".csv");
  write_file(csv_path, sweep_csv(result, axis_column, columns));
  out.files.push_back(csv_path.string());

  json extra = json::object();
  if (result.crossover_eta) extra["crossover_eta"] = *result.crossover_eta;
  write_metadata(dir, stem, subcommand, cfg, {csv_path.string()}, out, extra);
}

constexpr const char* kPauliLabels[4] = {"I", "X", "Y", "Z"};

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "sweep-freq", "sweep-time", "ent-decay", "transfer", "rates"};
  return names;
}

RunOutput run_subcommand(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);

  RunOutput out;
  if (name == "sweep-freq") {
    const auto result = sweep_frequency(cfg.sweep.freq_grid(), cfg.noise,
                                        cfg.shots, cfg.seed, cfg.resamples);
    emit_sweep(dir, "sweep_freq", "detuning_mhz", result,
               {{"avg_fidelity", "fidelity_stddev"}, {"herald_prob", ""}},
               name, cfg, out);
  } else if (name == "sweep-time") {
    const auto result = sweep_arrival_time(cfg.sweep.delay_grid(), cfg.noise,
                                           cfg.shots, cfg.seed, cfg.resamples);
    emit_sweep(dir, "sweep_time", "delay_us", result,
               {{"basis_fidelity", "basis_stddev"},
                {"superposition_fidelity", "superposition_stddev"}},
               name, cfg, out);
  } else if (name == "ent-decay") {
    const auto result = entanglement_decay(cfg.sweep.delay_grid(), cfg.noise,
                                           cfg.shots, cfg.seed);
    emit_sweep(dir, "ent_decay", "delay_us", result,
               {{"fidelity", "fidelity_stddev"}}, name, cfg, out);
  } else if (name == "transfer") {
    const auto summary =
        transfer_summary(cfg.noise, cfg.shots, cfg.seed, cfg.resamples);

    std::string csv = "input,fidelity,fidelity_stddev\n";
    for (size_t k = 0; k < summary.labels.size(); ++k) {
      csv += summary.labels[k] + "," + format_number(summary.fidelities[k]) +
             "," + format_number(summary.stddevs[k]) + "\n";
    }
    csv += "average," + format_number(summary.average) + "," +
           format_number(summary.average_stddev) + "\n";
    const fs::path fid_path = dir / "transfer.csv";
    write_file(fid_path, csv);
    out.files.push_back(fid_path.string());

    std::string chi_csv = "row,col,re,im\n";
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        const Complex v = summary.chi.entries()(m, n);
        chi_csv += std::string(kPauliLabels[m]) + "," + kPauliLabels[n] + "," +
                   format_number(v.real()) + "," + format_number(v.imag()) +
                   "\n";
      }
    }
    const fs::path chi_path = dir / "transfer_chi.csv";
    write_file(chi_path, chi_csv);
    out.files.push_back(chi_path.string());

    write_metadata(dir, "transfer", name, cfg,
                   {fid_path.string(), chi_path.string()}, out);
  } else if (name == "rates") {
    const auto result = rate_compare(cfg.sweep.length_grid(), cfg.rates);
    emit_sweep(dir, "rates", "length_km", result,
               {{"eta", ""}, {"rate_one_photon_hz", ""},
                {"rate_two_photon_hz", ""}},
               name, cfg, out);
  } else {
    throw ConfigError("unknown subcommand '" + name + "'");
  }
  return out;
}

}  // namespace qtst
