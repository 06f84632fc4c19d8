#pragma once

#include <filesystem>
#include <string>

namespace bobw::harness {

enum class PlotMode { regret_vs_t, regret_vs_sqrt_t, loglog };

PlotMode parse_plot_mode(const std::string& s);

// Reads an aggregate JSON (per-round curve) or a manifest.json (final regret
// per horizon) and returns whitespace-separated columns:
//   x  mean  lower  upper
// with lower/upper = mean -/+ 2 stderr. regret-vs-sqrtT uses x = sqrt(t),
// loglog uses log x and log mean and appends "# slope <value>".
std::string plot_columns(const std::filesystem::path& input, PlotMode mode);

}  // namespace bobw::harness
