#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bobw/harness/config.hpp"
#include "bobw/harness/plotdata.hpp"
#include "bobw/harness/runner.hpp"
#include "bobw/verify.hpp"

namespace {

int cmd_run(const std::string& path, std::size_t threads, const std::string& out_root, bool quiet, bool dry_run) {
  bobw::harness::ExperimentConfig cfg;
  try {
    cfg = bobw::harness::load_config(path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (dry_run) {
    std::printf("%s\nconfig_hash=%s\n", bobw::harness::canonical_json(cfg).c_str(),
                bobw::harness::config_hash(cfg).c_str());
    return 0;
  }
  bobw::harness::RunOptions opt;
  opt.threads = threads;
  opt.output_root = out_root;
  opt.quiet = quiet;
  const auto report = bobw::harness::run_experiment(cfg, opt);
  std::size_t failed = 0;
  for (const auto& c : report.cells) failed += c.ok ? 0 : 1;
  for (const auto& a : report.aggregates)
    std::printf("T=%zu seeds=%zu mean_regret=%.6g stderr=%.3g q_bar=%.6g\n", a.horizon, a.seeds,
                a.final_regret.mean, a.final_regret.stderr_, a.q_bar.mean);
  if (report.aggregates.size() >= 2) std::printf("loglog_slope=%.4f\n", report.loglog_slope);
  std::printf("config_hash=%s output=%s\n", report.config_hash.c_str(), report.output_dir.string().c_str());
  if (failed > 0) {
    std::fprintf(stderr, "%zu of %zu cells failed; see manifest.json\n", failed, report.cells.size());
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& level) {
  const auto results = bobw::verify::run_all(bobw::verify::parse_level(level));
  bool all = true;
  for (const auto& r : results) {
    const char* tag = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
    std::printf("%s %-32s measured=%-12.6g threshold=%-12.6g %s (%.1fs)\n", tag,
                r.name.c_str(), r.measured, r.threshold, r.detail.c_str(), r.seconds);
    all = all && (r.passed || r.informational);
  }
  return all ? 0 : 1;
}

int cmd_plotdata(const std::string& input, const std::string& mode, const std::string& output) {
  const std::string text = bobw::harness::plot_columns(input, bobw::harness::parse_plot_mode(mode));
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear contextual bandit experiments"};
  app.set_version_flag("--version", std::string(BOBW_VERSION));
  app.require_subcommand(1);

  std::string config_path, out_root;
  std::size_t threads = 0;
  bool quiet = false, dry_run = false;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "YAML or JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "Worker threads (default: config, then hardware)");
  run->add_option("--output-root", out_root, "Base for a relative output_dir");
  run->add_flag("--quiet", quiet, "No per-cell progress");
  run->add_flag("--dry-run", dry_run, "Validate, print the canonical config and hash, and exit");

  std::string level = "quick";
  auto* verify = app.add_subcommand("verify", "Numerical self-checks");
  verify->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));

  std::string input, mode = "regret-vs-t", output;
  auto* plot = app.add_subcommand("plotdata", "Plot-ready columns from an aggregate or manifest");
  plot->add_option("input", input, "aggregate JSON or manifest.json")->required()->check(CLI::ExistingFile);
  plot->add_option("--mode", mode, "regret-vs-t | regret-vs-sqrtT | loglog")
      ->check(CLI::IsMember({"regret-vs-t", "regret-vs-sqrtT", "loglog"}));
  plot->add_option("-o,--output", output, "Write here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, threads, out_root, quiet, dry_run);
    if (*verify) return cmd_verify(level);
    if (*plot) return cmd_plotdata(input, mode, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
