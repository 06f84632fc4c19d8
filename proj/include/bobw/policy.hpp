#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bobw/linalg.hpp"
#include "bobw/mgr.hpp"
#include "bobw/rng.hpp"
#include "bobw/simplex.hpp"

namespace bobw {

// Problem constants the schedules depend on.
struct ScheduleConstants {
  std::size_t arms = 0;
  std::size_t dim = 0;
  std::size_t horizon = 0;
  double loss_bound = 0.0;     // C_l
  double context_bound = 0.0;  // C_X
  double lambda_min = 0.0;

  double omega() const { return loss_bound * context_bound; }
  double delta() const { return 1.0 / (2.0 * loss_bound * context_bound); }
  double log_horizon() const;
  // Throws std::invalid_argument on K < 2, T < 2 or non-positive bounds.
  void validate() const;
};

enum class Beta1Mode {
  corollary,  // omega sqrt(K log T (log T / (delta lambda_min log K) + d))
  equation,   // omega sqrt(log(K d T) / log K)
};

// How many resampling steps a round gets.
//   bias_safe: smallest M with exp(-gamma delta lambda_min M / K) <= 1/T
//   literal:   ceil(2 beta - 1)
enum class IterationSchedule { bias_safe, literal };

std::string to_string(Beta1Mode m);
std::string to_string(IterationSchedule s);
Beta1Mode parse_beta1_mode(const std::string& s);
IterationSchedule parse_iteration_schedule(const std::string& s);

double beta_1(const ScheduleConstants& c, Beta1Mode mode = Beta1Mode::corollary);

// min(1, K log T / (2 delta lambda_min beta)).
double exploration_rate(const ScheduleConstants& c, double beta);

std::size_t mgr_iterations(const ScheduleConstants& c, double beta, double gamma,
                           IterationSchedule schedule = IterationSchedule::bias_safe);

// beta + beta_1 / sqrt(1 + entropy_sum / log K), where entropy_sum already
// includes the round being closed.
double next_beta(double beta, double beta1, double entropy_sum, std::size_t arms);

// Gibbs weights q(a) proportional to exp(-scores[a] / beta), with the max
// subtracted first and every weight floored at 1e-300 before normalizing.
void gibbs_into(std::span<const double> scores, double beta, std::span<double> out);
Distribution gibbs(std::span<const double> scores, double beta);

// Entropic FTRL distribution at context x: scores[a] = <x, L(a)>.
Distribution ftrl_dist(std::span<const Vector> cumulative, double beta, std::span<const double> x);

struct AgentDecision {
  Distribution q;
  Distribution pi;
  double gamma = 0.0;
  std::size_t arm = 0;
};

// Agents alternate act() and observe() once per round. Between the two, the
// agent is a frozen snapshot of pi_t that resampling and probes may query.
class Agent : public PolicySnapshot {
 public:
  virtual std::string id() const = 0;
  virtual std::size_t round() const = 0;  // 1-based index of the round being played

  // q_t and pi_t at an arbitrary context; both spans have size arms().
  virtual void policy_into(std::span<const double> x, std::span<double> q, std::span<double> pi) const = 0;
  virtual AgentDecision act(std::span<const double> x, Rng& rng);

  double play_probability(std::size_t arm, std::span<const double> x) const override;

  virtual double gamma() const = 0;
  virtual double beta() const = 0;
  // Resampling steps for this round's estimate; 0 for agents that ignore feedback.
  virtual std::size_t iterations() const = 0;
  virtual double mgr_delta() const = 0;
  virtual bool uses_estimates() const = 0;

  // theta_hat has one vector per arm (zero except at the played arm).
  virtual void observe(const AgentDecision& decision, std::span<const double> x, std::span<const Vector> theta_hat) = 0;
};

struct FtrlState {
  std::vector<Vector> cumulative;  // sum of theta_hat_s(a) over s < t
  double beta = 0.0;
  double entropy_sum = 0.0;  // sum of H(q_s(X_s)) over s < t
  std::size_t round = 1;
};

// Pins beta, gamma and M instead of adapting them.
struct FixedSchedule {
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t iterations = 0;
};

struct BobwOptions {
  Beta1Mode beta1_mode = Beta1Mode::corollary;
  IterationSchedule iteration_schedule = IterationSchedule::bias_safe;
  std::optional<double> beta1_override;
  std::optional<FixedSchedule> fixed;
};

class BobwAgent final : public Agent {
 public:
  BobwAgent(ScheduleConstants constants, BobwOptions options = {});

  std::string id() const override { return "bobw_real_ftrl"; }
  std::size_t arms() const override { return c_.arms; }
  std::size_t round() const override { return state_.round; }
  void policy_into(std::span<const double> x, std::span<double> q, std::span<double> pi) const override;
  double gamma() const override { return gamma_; }
  double beta() const override { return state_.beta; }
  std::size_t iterations() const override { return iterations_; }
  double mgr_delta() const override { return c_.delta(); }
  bool uses_estimates() const override { return true; }
  void observe(const AgentDecision& decision, std::span<const double> x, std::span<const Vector> theta_hat) override;

  const FtrlState& state() const { return state_; }
  const ScheduleConstants& constants() const { return c_; }
  double beta1() const { return beta1_; }

 private:
  void refresh_schedule();

  ScheduleConstants c_;
  BobwOptions opt_;
  double beta1_ = 0.0;
  FtrlState state_;
  double gamma_ = 1.0;
  std::size_t iterations_ = 0;
  mutable std::vector<double> scores_;
};

struct RealLinExp3Params {
  double eta = 0.0;
  double gamma = 0.0;
  std::size_t iterations = 0;
};

// eta = sqrt(log K / (3 K d T)), gamma = min(1, K log T eta / (2 delta lambda_min)),
// M = smallest count with exp(-gamma delta lambda_min M / K) <= 1/T.
RealLinExp3Params tuned_real_lin_exp3(const ScheduleConstants& c);

// Exponential weights with a fixed learning rate and fixed exploration.
class RealLinExp3Agent final : public Agent {
 public:
  RealLinExp3Agent(ScheduleConstants constants, RealLinExp3Params params);

  std::string id() const override { return "real_lin_exp3"; }
  std::size_t arms() const override { return c_.arms; }
  std::size_t round() const override { return round_; }
  void policy_into(std::span<const double> x, std::span<double> q, std::span<double> pi) const override;
  double gamma() const override { return p_.gamma; }
  double beta() const override { return beta_; }
  std::size_t iterations() const override { return p_.iterations; }
  double mgr_delta() const override { return c_.delta(); }
  bool uses_estimates() const override { return true; }
  void observe(const AgentDecision& decision, std::span<const double> x, std::span<const Vector> theta_hat) override;

  const RealLinExp3Params& params() const { return p_; }
  std::span<const Vector> cumulative() const { return cumulative_; }

 private:
  ScheduleConstants c_;
  RealLinExp3Params p_;
  double beta_ = 0.0;  // 1 / eta
  std::vector<Vector> cumulative_;
  std::size_t round_ = 1;
  mutable std::vector<double> scores_;
};

class UniformAgent final : public Agent {
 public:
  explicit UniformAgent(std::size_t arms);

  std::string id() const override { return "uniform"; }
  std::size_t arms() const override { return arms_; }
  std::size_t round() const override { return round_; }
  void policy_into(std::span<const double> x, std::span<double> q, std::span<double> pi) const override;
  double gamma() const override { return 1.0; }
  double beta() const override { return 0.0; }
  std::size_t iterations() const override { return 0; }
  double mgr_delta() const override { return 0.0; }
  bool uses_estimates() const override { return false; }
  void observe(const AgentDecision& decision, std::span<const double> x, std::span<const Vector> theta_hat) override;

 private:
  std::size_t arms_;
  std::size_t round_ = 1;
};

}  // namespace bobw
