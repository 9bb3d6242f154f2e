#pragma once

#include <string>
#include <vector>

#include "qtst/config.hpp"

namespace qtst {

struct RunOutput {
  std::vector<std::string> files;  // paths written, CSVs then metadata
};

const std::vector<std::string>& subcommand_names();

/// Dispatches one of sweep-freq | sweep-time | ent-decay | transfer | rates,
/// writing plot-ready CSV files plus a JSON metadata sidecar into
/// cfg.out_dir. Numeric CSV fields carry 12 significant digits and output
/// is byte-stable for equal (config, seed).
RunOutput run_subcommand(const std::string& name, const RunConfig& cfg);

}  // namespace qtst
