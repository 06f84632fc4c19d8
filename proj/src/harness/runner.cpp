#include "bobw/harness/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "bobw/harness/output.hpp"
#include <nlohmann/json.hpp>

namespace bobw::harness {

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Cell {
  std::size_t horizon_index = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
};

}  // namespace

bool RunReport::ok() const {
  for (const auto& c : cells)
    if (!c.ok) return false;
  return true;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& opt) {
  std::filesystem::path dir(cfg.output_dir);
  if (dir.is_absolute()) return dir;
  if (!opt.output_root.empty()) return opt.output_root / dir;
  if (const char* root = std::getenv("BOBW_OUTPUT_ROOT"); root != nullptr && *root != '\0')
    return std::filesystem::path(root) / dir;
  return dir;
}

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunReport report;
  report.config_hash = config_hash(cfg);
  report.output_dir = resolve_output_dir(cfg, opt);
  std::filesystem::create_directories(report.output_dir);
  const std::string started = utc_now();

  std::vector<Cell> cells;
  for (std::size_t h = 0; h < cfg.horizons.size(); ++h)
    for (std::size_t s = 0; s < cfg.seed_count; ++s) cells.push_back({h, cfg.horizons[h], cfg.seed_base + s});

  report.cells.resize(cells.size());
  // Curves only; round logs are dropped once the CSV is on disk.
  std::vector<ExperimentResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex print_mu;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      CellStatus& status = report.cells[i];
      status.horizon = cell.horizon;
      status.seed = cell.seed;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const ContextModel model = build_context_model(cfg);
        Environment env(cfg.environment, model, cell.horizon);
        auto agent = build_agent(cfg, env, model, cell.horizon);
        TrialOptions topt;
        topt.seed = cell.seed;
        topt.continuous_probes = cfg.continuous_probes;
        ExperimentResult r = run_trial(env, model, *agent, cell.horizon, topt);
        r.config_hash = report.config_hash;
        const std::string file = cell_stem(report.config_hash, cell.horizon, cell.seed) + ".csv";
        write_trial_csv(report.output_dir / file, r);
        if (cfg.export_history) {
          const std::string hist = cell_stem(report.config_hash, cell.horizon, cell.seed) + "-history.json";
          write_history_json(report.output_dir / hist, env, report.config_hash, cell.seed);
          status.history_file = hist;
        }
        r.rounds.clear();
        r.rounds.shrink_to_fit();
        r.probes.clear();
        status.file = file;
        status.final_regret = r.final_regret();
        status.ok = true;
        results[i] = std::move(r);
      } catch (const std::exception& e) {
        status.error = e.what();
      }
      status.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!opt.quiet) {
        std::lock_guard<std::mutex> lock(print_mu);
        std::cerr << "T=" << status.horizon << " seed=" << status.seed << (status.ok ? " ok " : " FAILED ")
                  << status.wall_seconds << "s" << (status.ok ? "" : ": " + status.error) << "\n";
      }
    }
  };

  std::size_t threads = opt.threads != 0 ? opt.threads : cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  nlohmann::json aggregates = nlohmann::json::array();
  std::vector<double> slope_t, slope_r;
  for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
    std::vector<ExperimentResult> group;
    std::vector<std::uint64_t> seeds;
    Diagnostics totals;
    totals.min_floor_ratio = 0.0;
    bool complete = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].horizon_index != h) continue;
      if (!report.cells[i].ok) {
        complete = false;
        continue;
      }
      const Diagnostics& d = results[i].diagnostics;
      totals.bias_violations += d.bias_violations;
      totals.literal_bias_violations += d.literal_bias_violations;
      totals.floor_violations += d.floor_violations;
      totals.min_floor_ratio = std::min(totals.min_floor_ratio, d.min_floor_ratio);
      totals.entropy_violations += d.entropy_violations;
      seeds.push_back(cells[i].seed);
      group.push_back(std::move(results[i]));
    }
    if (!complete || group.empty()) continue;
    AggregateSummary summary = aggregate(group);
    const std::string name = aggregate_name(report.config_hash, cfg.horizons[h]);
    write_aggregate_json(report.output_dir / name, summary, seeds, totals);
    aggregates.push_back(name);
    slope_t.push_back(static_cast<double>(cfg.horizons[h]));
    slope_r.push_back(summary.final_regret.mean);
    report.aggregate_files.push_back(name);
    report.aggregates.push_back(std::move(summary));
  }

  nlohmann::json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["config_hash"] = report.config_hash;
  manifest["version"] = BOBW_VERSION;
  manifest["config"] = nlohmann::json::parse(canonical_json(cfg));
  nlohmann::json cell_list = nlohmann::json::array();
  for (const CellStatus& c : report.cells) {
    nlohmann::json jc{{"T", c.horizon}, {"seed", c.seed}, {"status", c.ok ? "ok" : "failed"},
                      {"wall_seconds", c.wall_seconds}};
    jc["files"] = nlohmann::json::array();
    if (c.ok) jc["files"].push_back(c.file);
    if (c.ok && !c.history_file.empty()) jc["files"].push_back(c.history_file);
    if (!c.ok) jc["error"] = c.error;
    cell_list.push_back(std::move(jc));
  }
  manifest["cells"] = std::move(cell_list);
  manifest["aggregates"] = std::move(aggregates);
  nlohmann::json scaling{{"horizons", slope_t}, {"mean_final_regret", slope_r}};
  bool positive = slope_t.size() >= 2;
  for (double r : slope_r) positive = positive && r > 0.0;
  if (positive) {
    report.loglog_slope = loglog_slope(slope_t, slope_r);
    scaling["loglog_slope"] = report.loglog_slope;
  } else {
    scaling["loglog_slope"] = nullptr;
  }
  manifest["scaling"] = std::move(scaling);
  manifest["started_utc"] = started;
  manifest["finished_utc"] = utc_now();
  std::ofstream out(report.output_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + report.output_dir.string());
  out << manifest.dump(1) << "\n";
  return report;
}

}  // namespace bobw::harness
