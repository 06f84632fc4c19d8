#include "bobw/harness/plotdata.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "bobw/harness/output.hpp"
#include "bobw/simulator.hpp"
#include <nlohmann/json.hpp>

namespace bobw::harness {

PlotMode parse_plot_mode(const std::string& s) {
  if (s == "regret-vs-t") return PlotMode::regret_vs_t;
  if (s == "regret-vs-sqrtT") return PlotMode::regret_vs_sqrt_t;
  if (s == "loglog") return PlotMode::loglog;
  throw std::invalid_argument("unknown plot mode '" + s + "' (regret-vs-t | regret-vs-sqrtT | loglog)");
}

std::string plot_columns(const std::filesystem::path& input, PlotMode mode) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot read " + input.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw std::runtime_error(input.string() + ": unsupported schema_version");

  std::vector<double> xs, mean, se;
  std::string xname;
  if (j.contains("curve")) {
    xname = "t";
    xs = j["curve"]["t"].get<std::vector<double>>();
    mean = j["curve"]["mean"].get<std::vector<double>>();
    se = j["curve"]["stderr"].get<std::vector<double>>();
  } else if (j.contains("aggregates")) {
    xname = "T";
    const auto dir = input.parent_path();
    for (const auto& name : j["aggregates"]) {
      std::ifstream ain(dir / name.get<std::string>());
      if (!ain) throw std::runtime_error("missing aggregate " + name.get<std::string>());
      const nlohmann::json a = nlohmann::json::parse(ain);
      xs.push_back(a["horizon"].get<double>());
      mean.push_back(a["final_regret"]["mean"].get<double>());
      se.push_back(a["final_regret"]["stderr"].get<double>());
    }
  } else {
    throw std::runtime_error(input.string() + ": neither an aggregate nor a manifest");
  }

  std::string out;
  char line[160];
  switch (mode) {
    case PlotMode::regret_vs_t: out += "# " + xname + " mean lower upper\n"; break;
    case PlotMode::regret_vs_sqrt_t: out += "# sqrt_" + xname + " mean lower upper\n"; break;
    case PlotMode::loglog: out += "# log_" + xname + " log_mean log_lower log_upper\n"; break;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = xs[i], m = mean[i], lo = mean[i] - 2.0 * se[i], hi = mean[i] + 2.0 * se[i];
    if (mode == PlotMode::regret_vs_sqrt_t) x = std::sqrt(x);
    if (mode == PlotMode::loglog) {
      if (x <= 0.0 || m <= 0.0) continue;
      lx.push_back(x);
      ly.push_back(m);
      x = std::log(x);
      m = std::log(m);
      lo = lo > 0.0 ? std::log(lo) : NAN;
      hi = std::log(hi);
    }
    std::snprintf(line, sizeof line, "%.10g %.10g %.10g %.10g\n", x, m, lo, hi);
    out += line;
  }
  if (mode == PlotMode::loglog) {
    if (lx.size() >= 2) {
      std::snprintf(line, sizeof line, "# slope %.6f\n", loglog_slope(lx, ly));
      out += line;
    } else {
      out += "# slope nan\n";
    }
  }
  return out;
}

}  // namespace bobw::harness
