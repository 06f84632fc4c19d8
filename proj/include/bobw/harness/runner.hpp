#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bobw/harness/config.hpp"
#include "bobw/simulator.hpp"

namespace bobw::harness {

struct RunOptions {
  // Relative output_dir values resolve against this; if empty, against
  // $BOBW_OUTPUT_ROOT, else the working directory.
  std::filesystem::path output_root;
  std::size_t threads = 0;  // overrides the config when nonzero
  bool quiet = true;
};

struct CellStatus {
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string file;
  std::string history_file;  // empty unless the config asks for history export
  std::string error;
  double wall_seconds = 0.0;
  double final_regret = 0.0;
};

struct RunReport {
  std::string config_hash;
  std::filesystem::path output_dir;
  std::vector<CellStatus> cells;
  std::vector<AggregateSummary> aggregates;
  std::vector<std::string> aggregate_files;
  double loglog_slope = 0.0;  // over horizons, when there are at least two
  bool ok() const;
};

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& opt);

// Runs every (horizon, seed) cell, writes one CSV per cell, one aggregate JSON
// per horizon with all cells successful, then manifest.json. A failed cell is
// recorded and does not stop the others.
RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace bobw::harness
