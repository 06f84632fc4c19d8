#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bobw::verify {

enum class Level { quick, full };

Level parse_level(const std::string& s);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
  std::map<std::string, double> values;  // named side counts
  bool informational = false;             // reported, not gating
};

// Closed-form FTRL vs the numeric minimizer; measured is the worst sup-norm gap.
CheckResult ftrl_agreement(std::size_t instances, std::uint64_t seed);

// Point-mass context, arm always played: output must equal 1 - (1 - delta)^{M+1}.
CheckResult mgr_scalar_exact();

// Entrywise mean of `draws` resampling estimates vs the truncated series.
CheckResult mgr_expectation(std::size_t draws, double tolerance, std::uint64_t seed);

// Truncated series vs Gauss-Jordan inverse once M passes the geometric tail bound.
CheckResult series_converges_to_inverse();

// Per-round invariants over BoBW runs: bias bound, estimate floor, entropy
// bound, operator-norm bound. One result per invariant.
std::vector<CheckResult> run_invariants(std::size_t horizon, std::size_t seeds, std::uint64_t base_seed);

// Horizons 2..5 on the same instances: the only runs where the missing mass
// stays below e. With beta_1 this small the estimate floor is not expected to
// hold, so the floor count is reported rather than checked.
CheckResult short_horizon_runs(std::size_t seeds, std::uint64_t base_seed);
// R_T - (Delta* Qbar - C) averaged over seeds must not fall below -3 stderr.
CheckResult self_bounding(bool corrupted, std::size_t horizon, std::size_t seeds, std::uint64_t base_seed);

std::vector<CheckResult> run_all(Level level);

}  // namespace bobw::verify
