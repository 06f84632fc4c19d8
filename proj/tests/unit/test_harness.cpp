#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bobw/harness/config.hpp"
#include "bobw/harness/output.hpp"
#include "bobw/harness/plotdata.hpp"
#include "bobw/harness/runner.hpp"

using namespace bobw;
using namespace bobw::harness;
namespace fs = std::filesystem;

namespace {

const char* kGap = R"(name: gap
context:
  kind: discrete
  points: [[0.4242640687119285, 0], [0, 0.4242640687119285]]
  weights: [0.5, 0.5]
environment:
  regime: stochastic
  base_params: [[-0.35355339059327373, 0.35355339059327373], [0.35355339059327373, -0.35355339059327373]]
  noise_bound: 0.05
  param_bound: 0.5
  gap: 0.3
agent:
  kind: bobw_real_ftrl
horizons: [200, 400]
seeds: {count: 2, base: 3}
output_dir: gap
threads: 1
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  if (pos == std::string::npos) throw std::logic_error("fixture text not found: " + from);
  return s.replace(pos, from.size(), to);
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("bobw-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ParsesGapExample) {
  const auto cfg = parse_config(kGap);
  EXPECT_EQ(cfg.name, "gap");
  EXPECT_EQ(cfg.context.points.size(), 2u);
  EXPECT_EQ(cfg.environment.regime, Regime::stochastic);
  EXPECT_EQ(cfg.horizons, (std::vector<std::size_t>{200, 400}));
  EXPECT_EQ(cfg.seed_count, 2u);
  EXPECT_EQ(cfg.seed_base, 3u);
  ASSERT_TRUE(cfg.gap.has_value());
  EXPECT_DOUBLE_EQ(*cfg.gap, 0.3);
}

TEST(Config, CanonicalRoundTripAndHash) {
  const auto cfg = parse_config(kGap);
  const std::string canon = canonical_json(cfg);
  const auto again = parse_config(canon, "<canonical>");
  EXPECT_EQ(canonical_json(again), canon);
  EXPECT_EQ(config_hash(again), config_hash(cfg));
  EXPECT_EQ(config_hash(cfg).size(), 16u);
  // Key order and formatting do not matter; values do.
  const auto reordered = parse_config(replace(kGap, "threads: 1\n", "") + "threads: 1\n");
  EXPECT_EQ(config_hash(reordered), config_hash(cfg));
  EXPECT_NE(config_hash(parse_config(replace(kGap, "base: 3", "base: 4"))), config_hash(cfg));
}

TEST(Config, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, UnknownKeyReportsLine) {
  try {
    parse_config(replace(kGap, "  noise_bound: 0.05", "  noise_bnd: 0.05"), "gap.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 9);
    EXPECT_NE(std::string(e.what()).find("gap.yaml:9:"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("noise_bnd"), std::string::npos);
  }
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(parse_config(replace(kGap, "regime: stochastic", "regime: chaotic")), ConfigError);
  EXPECT_THROW(parse_config(replace(kGap, "gap: 0.3", "gap: 0.31")), ConfigError);
  EXPECT_THROW(parse_config(replace(kGap, "weights: [0.5, 0.5]", "weights: [0.5, 0.6]")), ConfigError);
  EXPECT_THROW(parse_config(replace(kGap, "horizons: [200, 400]", "horizons: [1]")), ConfigError);
  EXPECT_THROW(parse_config(replace(kGap, "param_bound: 0.5", "param_bound: 0.4")), ConfigError);
  EXPECT_THROW(parse_config("name: [unclosed"), ConfigError);
  EXPECT_THROW(parse_config(replace(kGap, "horizons: [200, 400]\n", "")), ConfigError);
}

TEST(Config, BuildsAgents) {
  const auto cfg = parse_config(replace(kGap, "kind: bobw_real_ftrl", "kind: real_lin_exp3"));
  const auto model = build_context_model(cfg);
  Environment env(cfg.environment, model, 400);
  EXPECT_EQ(build_agent(cfg, env, model, 400)->id(), "real_lin_exp3");
  const auto u = parse_config(replace(kGap, "kind: bobw_real_ftrl", "kind: uniform"));
  EXPECT_EQ(build_agent(u, env, model, 400)->id(), "uniform");
}

TEST(Output, AggregateRounds) {
  EXPECT_EQ(aggregate_rounds(5), (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  const auto r = aggregate_rounds(100001);
  EXPECT_EQ(r.front(), 11u);
  EXPECT_EQ(r.back(), 100001u);
  EXPECT_LE(r.size(), 10001u);
}

TEST(Runner, WritesCellsAggregatesAndManifest) {
  TempDir tmp;
  const auto cfg = parse_config(kGap);
  RunOptions opt;
  opt.output_root = tmp.path;
  const auto report = run_experiment(cfg, opt);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report.cells.size(), 4u);
  EXPECT_EQ(report.aggregates.size(), 2u);
  const fs::path dir = tmp.path / "gap";
  const std::string h = config_hash(cfg);
  for (std::size_t T : {200u, 400u})
    for (std::uint64_t s : {3u, 4u}) {
      const auto table = read_trial_csv(dir / (cell_stem(h, T, s) + ".csv"));
      EXPECT_EQ(table.schema_version, 1);
      EXPECT_EQ(table.columns.size(), 8u);
      EXPECT_EQ(table.rows.size(), T);
      EXPECT_EQ(table.rows.back()[0], static_cast<double>(T));
    }
  EXPECT_TRUE(fs::exists(dir / aggregate_name(h, 200)));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const std::string manifest = slurp(dir / "manifest.json");
  EXPECT_NE(manifest.find("\"loglog_slope\""), std::string::npos);
  EXPECT_NE(manifest.find(h), std::string::npos);

  const std::string t = plot_columns(dir / aggregate_name(h, 400), PlotMode::regret_vs_t);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 401);
  const std::string ll = plot_columns(dir / "manifest.json", PlotMode::loglog);
  EXPECT_NE(ll.find("# slope"), std::string::npos);
  const std::string sq = plot_columns(dir / "manifest.json", PlotMode::regret_vs_sqrt_t);
  EXPECT_NE(sq.find("20 "), std::string::npos);
}

TEST(Runner, CsvIsReproducible) {
  TempDir a, b;
  const auto cfg = parse_config(kGap);
  RunOptions oa, ob;
  oa.output_root = a.path;
  ob.output_root = b.path;
  const auto ra = run_experiment(cfg, oa), rb = run_experiment(cfg, ob);
  for (std::size_t i = 0; i < ra.cells.size(); ++i)
    EXPECT_EQ(slurp(ra.output_dir / ra.cells[i].file), slurp(rb.output_dir / rb.cells[i].file));
}

TEST(Runner, ThreadCountDoesNotChangeResults) {
  TempDir a, b;
  const auto cfg = parse_config(kGap);
  RunOptions oa, ob;
  oa.output_root = a.path;
  oa.threads = 1;
  ob.output_root = b.path;
  ob.threads = 3;
  const auto ra = run_experiment(cfg, oa), rb = run_experiment(cfg, ob);
  for (std::size_t i = 0; i < ra.cells.size(); ++i)
    EXPECT_EQ(slurp(ra.output_dir / ra.cells[i].file), slurp(rb.output_dir / rb.cells[i].file));
}

TEST(Runner, FailedCellIsRecorded) {
  TempDir tmp;
  auto cfg = parse_config(kGap);
  // Break the spec after parsing so every cell fails in the environment check.
  cfg.environment.base_params.push_back(Vector{0.1, 0.1, 0.1});
  RunOptions opt;
  opt.output_root = tmp.path;
  const auto report = run_experiment(cfg, opt);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.aggregates.empty());
  EXPECT_FALSE(report.cells[0].error.empty());
  EXPECT_TRUE(fs::exists(report.output_dir / "manifest.json"));
  EXPECT_NE(slurp(report.output_dir / "manifest.json").find("\"failed\""), std::string::npos);
}

TEST(Config, GeneratedBaseParams) {
  const std::string gen = "base_params: {arms: 3, seed: 11, norm: 0.25}";
  const std::string lit =
      "base_params: [[-0.35355339059327373, 0.35355339059327373], [0.35355339059327373, -0.35355339059327373]]";
  const std::string text = replace(replace(kGap, lit, gen), "  gap: 0.3\n", "");
  const auto cfg = parse_config(text);
  ASSERT_TRUE(cfg.param_generator.has_value());
  ASSERT_EQ(cfg.environment.base_params.size(), 3u);
  for (const Vector& v : cfg.environment.base_params) {
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(std::hypot(v[0], v[1]), 0.25, 1e-15);
  }
  // same seed, same draw; the canonical form keeps the generator, not the vectors
  const auto again = parse_config(canonical_json(cfg));
  EXPECT_EQ(canonical_json(again), canonical_json(cfg));
  for (std::size_t a = 0; a < 3; ++a)
    EXPECT_EQ(again.environment.base_params[a].raw(), cfg.environment.base_params[a].raw());
  EXPECT_NE(canonical_json(cfg).find("\"seed\":11"), std::string::npos);
  const auto other = parse_config(replace(text, "seed: 11", "seed: 12"));
  EXPECT_NE(other.environment.base_params[0].raw(), cfg.environment.base_params[0].raw());
  EXPECT_THROW(parse_config(replace(text, "arms: 3", "arms: 1")), ConfigError);
  EXPECT_THROW(parse_config(replace(text, "norm: 0.25", "norm: 0.9")), ConfigError);  // exceeds param_bound
}

TEST(Runner, ExportsHistory) {
  TempDir tmp;
  const auto cfg = parse_config(replace(kGap, "threads: 1\n", "threads: 1\nexport_history: true\n"));
  RunOptions opt;
  opt.output_root = tmp.path;
  const auto report = run_experiment(cfg, opt);
  ASSERT_TRUE(report.ok());
  const auto& cell = report.cells.front();
  ASSERT_FALSE(cell.history_file.empty());
  const auto j = nlohmann::json::parse(slurp(report.output_dir / cell.history_file));
  EXPECT_EQ(j["horizon"].get<std::size_t>(), cell.horizon);
  EXPECT_EQ(j["arms"].get<std::size_t>(), 2u);
  ASSERT_EQ(j["params"].size(), cell.horizon);
  // stochastic regime: every round emits the base parameters
  for (const auto& round : j["params"])
    for (std::size_t a = 0; a < 2; ++a)
      EXPECT_EQ(round[a].get<std::vector<double>>(), cfg.environment.base_params[a].raw());
  const auto m = nlohmann::json::parse(slurp(report.output_dir / "manifest.json"));
  EXPECT_EQ(m["cells"][0]["files"].size(), 2u);
  EXPECT_EQ(m["config"]["export_history"], true);
}

TEST(Output, CsvSchemaChecked) {
  TempDir tmp;
  std::ofstream(tmp.path / "bad.csv") << "t,x\n1,2\n";
  EXPECT_THROW(read_trial_csv(tmp.path / "bad.csv"), std::runtime_error);
  std::ofstream(tmp.path / "v2.csv") << "#schema_version=2\nt\n1\n";
  EXPECT_THROW(read_trial_csv(tmp.path / "v2.csv"), std::runtime_error);
}

TEST(Plotdata, ModeParsing) {
  EXPECT_EQ(parse_plot_mode("loglog"), PlotMode::loglog);
  EXPECT_THROW(parse_plot_mode("bar"), std::invalid_argument);
}
