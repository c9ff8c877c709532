#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdiel/energy.hpp"
#include "qdiel_cli/config.hpp"
#include "qdiel_cli/report.hpp"

namespace qdiel::cli {

struct RunResult {
  // 0 all checks passed, 1 a check failed.
  int status = 0;
  Report report;
  std::vector<std::filesystem::path> files;
};

// Validates `cfg` (ConfigError on failure), runs the command, writes its CSV
// files and report.txt into cfg.output_dir. `log` receives progress and the
// energy text blocks.
RunResult run(const RunConfig& cfg, std::ostream& log);

// The {omega_p} x {gamma} test matrix used by verify-all.
std::vector<MediumParams> media_matrix(const MediumParams& base);

std::string energy_csv_header();
std::string energy_csv_row(const EnergyReport& r);
void write_energy_text(std::ostream& os, const EnergyReport& r);

}  // namespace qdiel::cli
