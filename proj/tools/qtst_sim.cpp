// qtst-sim: deterministic simulator of teleportation-based photon-to-spin
// state transfer. Subcommands reproduce the fidelity/herald sweeps, the
// six-input transfer summary with process tomography, the entanglement
// decay curve, and the entanglement-rate comparison; results land as CSV
// files plus a JSON metadata sidecar.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qtst/runner.hpp"
#include "qtst/version.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  long long shots = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool shots_set = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qtst::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string single_line(std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return message;
}

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Configuration file (flat key = value sections)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "PRNG seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--shots", opts.shots,
                  "Shots per measurement setting; 0 = exact probabilities")
      ->each([&](const std::string&) { opts.shots_set = true; });
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--set", opts.overrides,
                  "Override a config key, e.g. --set noise.p_spam=0.02")
      ->expected(-1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teleportation-based photon-to-spin transfer simulator"};
  app.set_version_flag("--version",
                       std::string(qtst::kToolName) + " " + qtst::kVersion);
  app.require_subcommand(1);

  CommonOptions opts;
  for (const auto& name : qtst::subcommand_names()) {
    add_common_options(app.add_subcommand(name), opts);
  }
  app.get_subcommand("sweep-freq")
      ->description("Fidelity and herald probability vs frequency detuning");
  app.get_subcommand("sweep-time")
      ->description("Fidelity vs photon arrival delay, basis vs superposition inputs");
  app.get_subcommand("ent-decay")
      ->description("Electron-nuclear entanglement fidelity vs storage delay");
  app.get_subcommand("transfer")
      ->description("Six-input transfer fidelities and process chi matrix");
  app.get_subcommand("rates")
      ->description("One- vs two-photon entanglement rate scaling over distance");

  CLI11_PARSE(app, argc, argv);

  try {
    qtst::RunConfig cfg;
    if (!opts.config_path.empty()) {
      cfg = qtst::parse_config(read_file(opts.config_path));
    }
    // Precedence: flags > --set > file > defaults.
    for (const auto& kv : opts.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw qtst::ConfigError("--set expects key=value, got '" + kv + "'");
      }
      qtst::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.shots_set) cfg.shots = opts.shots;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;

    const std::string name = app.get_subcommands().front()->get_name();
    const qtst::RunOutput output = qtst::run_subcommand(name, cfg);
    for (const auto& file : output.files) {
      std::cout << "wrote " << file << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "qtst-sim: error: " << single_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
