#include "bobw/harness/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bobw::harness {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

nlohmann::json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"stderr", e.stderr_}, {"n", e.n}}; }

}  // namespace

void write_trial_csv(const std::filesystem::path& path, const ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "#schema_version=" << kSchemaVersion << "\n";
  out << "t,regret_cum,regret_inst,entropy,beta,gamma,arm,loss\n";
  for (const RoundLog& r : result.rounds) {
    out << r.t << ',' << num(r.regret_cum) << ',' << num(r.regret) << ',' << num(r.entropy) << ',' << num(r.beta)
        << ',' << num(r.gamma) << ',' << r.arm << ',' << num(r.loss) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CsvTable read_trial_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#schema_version=", 0) != 0)
    throw std::runtime_error(path.string() + ": missing schema_version line");
  table.schema_version = std::stoi(line.substr(16));
  if (table.schema_version != kSchemaVersion)
    throw std::runtime_error(path.string() + ": unsupported schema_version " + std::to_string(table.schema_version));
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  table.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& cell : split(line)) row.push_back(std::stod(cell));
    if (row.size() != table.columns.size()) throw std::runtime_error(path.string() + ": ragged row");
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::size_t> aggregate_rounds(std::size_t horizon) {
  std::vector<std::size_t> rounds;
  const std::size_t stride = horizon <= 10000 ? 1 : (horizon + 9999) / 10000;
  for (std::size_t t = stride; t <= horizon; t += stride) rounds.push_back(t);
  if (horizon > 0 && (rounds.empty() || rounds.back() != horizon)) rounds.push_back(horizon);
  return rounds;
}

void write_aggregate_json(const std::filesystem::path& path, const AggregateSummary& s,
                          const std::vector<std::uint64_t>& seeds, const Diagnostics& totals) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = s.config_hash;
  j["horizon"] = s.horizon;
  j["seeds"] = seeds;
  j["agent"] = s.agent_id;
  j["environment"] = s.environment_id;
  j["final_regret"] = estimate_json(s.final_regret);
  j["final_realized_regret"] = estimate_json(s.final_realized_regret);
  j["q_bar"] = estimate_json(s.q_bar);
  j["diagnostics"] = {{"bias_violations", totals.bias_violations},
                      {"literal_schedule_bias_violations", totals.literal_bias_violations},
                      {"floor_violations", totals.floor_violations},
                      {"min_floor_ratio", totals.min_floor_ratio},
                      {"entropy_violations", totals.entropy_violations}};
  nlohmann::json curve;
  std::vector<std::size_t> ts = aggregate_rounds(s.horizon);
  std::vector<double> mean, se, lo, hi;
  for (std::size_t t : ts) {
    mean.push_back(s.mean[t - 1]);
    se.push_back(s.stderr_[t - 1]);
    lo.push_back(s.min[t - 1]);
    hi.push_back(s.max[t - 1]);
  }
  curve["t"] = ts;
  curve["mean"] = mean;
  curve["stderr"] = se;
  curve["min"] = lo;
  curve["max"] = hi;
  j["curve"] = curve;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << "\n";
}

void write_history_json(const std::filesystem::path& path, const Environment& env, const std::string& config_hash,
                        std::uint64_t seed) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& round : env.history()) {
    nlohmann::json row = nlohmann::json::array();
    for (const Vector& v : round) row.push_back(v.raw());
    params.push_back(std::move(row));
  }
  nlohmann::json j{{"schema_version", kSchemaVersion}, {"config_hash", config_hash}, {"horizon", env.history().size()},
                   {"seed", seed}, {"arms", env.arms()}, {"dim", env.dim()}, {"params", std::move(params)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string cell_stem(const std::string& hash, std::size_t horizon, std::uint64_t seed) {
  return hash + "-T" + std::to_string(horizon) + "-seed" + std::to_string(seed);
}

std::string aggregate_name(const std::string& hash, std::size_t horizon) {
  return hash + "-T" + std::to_string(horizon) + "-aggregate.json";
}

}  // namespace bobw::harness
