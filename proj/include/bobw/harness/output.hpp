#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bobw/simulator.hpp"

namespace bobw::harness {

inline constexpr int kSchemaVersion = 1;

// Per-trial CSV. The first line is "#schema_version=1", then the header
//   t,regret_cum,regret_inst,entropy,beta,gamma,arm,loss
// and one row per logged round. Reals are written with 17 significant digits.
void write_trial_csv(const std::filesystem::path& path, const ExperimentResult& result);

struct CsvTable {
  int schema_version = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Throws std::runtime_error on a missing or mismatched schema line.
CsvTable read_trial_csv(const std::filesystem::path& path);

// Curve points kept in the aggregate: every round up to 10^4, then a stride
// of ceil(T / 10^4) with the last round always present.
std::vector<std::size_t> aggregate_rounds(std::size_t horizon);

void write_aggregate_json(const std::filesystem::path& path, const AggregateSummary& summary,
                          const std::vector<std::uint64_t>& seeds, const Diagnostics& totals);

// Every theta_t(a) the environment emitted, as
//   {schema_version, config_hash, horizon, seed, arms, dim, params}
// with params[t-1][a] the d-vector of round t and arm a.
void write_history_json(const std::filesystem::path& path, const Environment& env, const std::string& config_hash,
                        std::uint64_t seed);

std::string cell_stem(const std::string& hash, std::size_t horizon, std::uint64_t seed);
std::string aggregate_name(const std::string& hash, std::size_t horizon);

}  // namespace bobw::harness
