#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bobw/context_model.hpp"
#include "bobw/environment.hpp"
#include "bobw/linalg.hpp"
#include "bobw/policy.hpp"
#include "bobw/simplex.hpp"

namespace bobw {

struct RoundLog {
  std::size_t t = 0;
  Vector x;
  std::vector<double> q;
  std::vector<double> pi;
  double gamma = 0.0;
  double beta = 0.0;
  std::size_t iterations = 0;
  std::size_t arm = 0;
  double loss = 0.0;
  double regret = 0.0;  // conditional expectation over A_t given pi_t
  double entropy = 0.0;
  double miss = 0.0;    // 1 - pi_t(a*(x_t) | x_t)
  double regret_cum = 0.0;
};

// Per probe context, sums over rounds of q_t(a|x), pi_t(a|x) and H(q_t(x)).
struct ProbeTrace {
  Vector x;
  double weight = 0.0;
  std::vector<double> q_sum;
  std::vector<double> pi_sum;
  double entropy_sum = 0.0;
  std::size_t optimal_arm = 0;  // filled after the run
  double q_miss = 0.0;          // sum_t (1 - q_t(a*|x))
  double pi_miss = 0.0;         // Q(a*|x)
};

struct Diagnostics {
  std::size_t bias_violations = 0;
  double worst_bias_ratio = 0.0;  // max bound / target
  std::size_t literal_bias_violations = 0;  // same check with M = ceil(2 beta - 1)
  std::size_t floor_violations = 0;
  double min_floor_ratio = 0.0;  // min over rounds and support of l_hat / beta
  std::size_t entropy_violations = 0;
  std::size_t entropy_small_branch = 0;
  std::size_t entropy_large_branch = 0;
  double max_op_norm_ratio = 0.0;  // ||Sigma_dagger||_op / (delta (M + 1))
  std::size_t total_iterations = 0;
};

struct TrialOptions {
  std::uint64_t seed = 0;
  std::size_t continuous_probes = 256;
  bool check_bias = true;
  bool check_floor = true;
  bool check_op_norm = false;
  // Full round logs up to this horizon, every 10th round above it.
  std::size_t full_log_limit = 100000;
  bool keep_rounds = true;
};

struct ExperimentResult {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::string agent_id;
  std::string environment_id;
  std::string config_hash;
  std::vector<double> regret_curve;           // R_t, conditional-expectation form
  std::vector<double> realized_regret_curve;  // realized loss differences
  std::vector<double> entropy_trace;          // cumulative H(q_t(X_t))
  double q_bar = 0.0;                         // E over probe contexts of Q(a*|x)
  std::vector<ProbeTrace> probes;
  std::vector<RoundLog> rounds;
  Diagnostics diagnostics;
  double wall_seconds = 0.0;

  double final_regret() const { return regret_curve.empty() ? 0.0 : regret_curve.back(); }
};

// Plays T rounds: the environment commits theta_t from rounds < t, a context
// is drawn, the agent acts, the loss is realized, the played arm's parameter
// is estimated and the agent observes it. The comparator a*_T is resolved
// after the last round. Throws std::invalid_argument on inconsistent K or d.
ExperimentResult run_trial(Environment& env, const ContextModel& model, Agent& agent, std::size_t horizon,
                           const TrialOptions& options);

// sum_a pi(a|x) <x, theta(a)> - <x, theta(a*)>.
double regret_increment(std::span<const double> pi, std::span<const double> x, std::span<const Vector> params,
                        std::size_t optimal_arm);

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

// Mean and standard error of per-run Q-bar across runs.
Estimate q_bar_estimate(std::span<const ExperimentResult> results);
Estimate mean_final_regret(std::span<const ExperimentResult> results);
Estimate mean_final_realized_regret(std::span<const ExperimentResult> results);

struct AggregateSummary {
  std::size_t horizon = 0;
  std::size_t seeds = 0;
  std::string agent_id;
  std::string environment_id;
  std::string config_hash;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> min;
  std::vector<double> max;
  Estimate final_regret;
  Estimate final_realized_regret;
  Estimate q_bar;
};

// Throws std::invalid_argument if the runs differ in horizon, agent,
// environment or config hash, or if a seed repeats.
AggregateSummary aggregate(std::span<const ExperimentResult> results);

// Least-squares slope of log y against log x; needs at least two points.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace bobw
