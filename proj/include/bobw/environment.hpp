#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bobw/context_model.hpp"
#include "bobw/linalg.hpp"
#include "bobw/rng.hpp"

namespace bobw {

enum class Regime { stochastic, adversarial, corrupted };

// How loss parameters move away from the base parameters theta_0.
//
// sign_flip:          corrupted regime. Rounds 1..c emit -theta_0(a), later
//                     rounds emit theta_0(a).
// best_arm_switcher:  adversarial regime. The horizon is cut into four
//                     quarters; quarter p emits theta_0((a + p) mod K), so
//                     the arm holding each base profile moves every T/4
//                     rounds.
// history_reactive:   adversarial regime. Let m be the arm with the fewest
//                     pulls in rounds < t (lowest index on ties). Arm m gets
//                     theta_0(0) and the rest follow by rotation:
//                     theta_t(a) = theta_0((a - m) mod K).
enum class Strategy { none, sign_flip, best_arm_switcher, history_reactive };

std::string to_string(Regime r);
std::string to_string(Strategy s);
Regime parse_regime(const std::string& s);
Strategy parse_strategy(const std::string& s);

struct EnvironmentSpec {
  Regime regime = Regime::stochastic;
  std::vector<Vector> base_params;  // theta_0(a), one per arm
  Strategy strategy = Strategy::none;
  std::size_t corrupt_rounds = 0;   // c for sign_flip
  double corruption_budget = 0.0;   // C, loss units x rounds
  double noise_bound = 0.0;         // C_eps; noise is uniform on [-C_eps, C_eps]
  std::optional<double> param_bound;  // C_Theta; defaults to max ||theta_0(a)||
};

// Rounds 1..t-1 as seen by the adversary.
struct PastRounds {
  std::span<const std::size_t> arms;
};

// Post-hoc comparator a*_T(x) = argmin_a <x, sum_t theta_t(a)>, lowest index
// on ties.
struct OptimalPolicy {
  std::vector<Vector> cumulative;
  std::size_t arm(const Vector& x) const;
  std::size_t arm(std::span<const double> x) const;
};

class Environment {
 public:
  // Validates the spec against the context model and horizon. Over-budget
  // corruption, parameters above C_Theta and inconsistent dimensions throw
  // std::invalid_argument.
  Environment(EnvironmentSpec spec, const ContextModel& model, std::size_t horizon);

  std::size_t arms() const { return spec_.base_params.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t horizon() const { return horizon_; }
  Regime regime() const { return spec_.regime; }
  Strategy strategy() const { return spec_.strategy; }
  const EnvironmentSpec& spec() const { return spec_; }

  double param_bound() const { return param_bound_; }
  double noise_bound() const { return spec_.noise_bound; }
  double context_bound() const { return context_bound_; }
  // C_l = C_X * C_Theta + C_eps.
  double loss_bound() const { return context_bound_ * param_bound_ + spec_.noise_bound; }
  // Sum over the horizon of max_{a,b} sup_x |<x, D_t(a) - D_t(b)>| with
  // D_t(a) = theta_t(a) - theta_0(a), i.e. how far the corruption moves any
  // loss difference between two arms.
  double accounted_corruption() const { return accounted_corruption_; }

  // Emits theta_t for round t (1-based). Requires t == rounds_emitted() + 1
  // and history to cover exactly rounds 1..t-1.
  const std::vector<Vector>& emit_round_params(std::size_t t, PastRounds history);
  std::size_t rounds_emitted() const { return history_.size(); }
  const std::vector<Vector>& params_at(std::size_t t) const { return history_.at(t - 1); }
  const std::vector<std::vector<Vector>>& history() const { return history_; }

  // <x, theta_t(a)> + eps with eps uniform on [-C_eps, C_eps]; one draw.
  double realize_loss(std::size_t t, std::size_t arm, std::span<const double> x, Rng& rng) const;
  double mean_loss(std::size_t t, std::size_t arm, std::span<const double> x) const;

  // Uses the history recorded so far.
  OptimalPolicy optimal_policy() const;

  // Parameters the strategy would emit at round t; pure given the history.
  std::vector<Vector> params_for_round(std::size_t t, PastRounds history) const;

 private:
  double per_round_deviation(const ContextModel& model, const std::vector<Vector>& row) const;
  std::vector<Vector> rotated(std::size_t shift) const;
  std::vector<Vector> params_given_counts(std::size_t t, std::span<const std::size_t> pulls) const;

  EnvironmentSpec spec_;
  std::size_t dim_ = 0;
  std::size_t horizon_ = 0;
  double param_bound_ = 0.0;
  double context_bound_ = 0.0;
  double accounted_corruption_ = 0.0;
  std::vector<std::vector<Vector>> history_;
  std::vector<std::size_t> pulls_;
};

struct GapCertificate {
  double gap = 0.0;                      // claimed Delta*, verified
  double measured_gap = 0.0;             // min over checked contexts
  std::vector<std::size_t> optimal_arm;  // a*_0 at each checked context
  bool approximate = false;              // checked on a grid, not the support
};

struct GapCheck {
  std::optional<GapCertificate> certificate;
  std::optional<Vector> violating_context;
  double measured_gap = 0.0;
  bool ok() const { return certificate.has_value(); }
};

// Checks min_{b != a*_0(x)} <x, theta_0(b)> - <x, theta_0(a*_0(x))> >= claimed
// at every support point, up to 1e-12 of round-off. Continuous models need an explicit grid and the
// certificate is flagged approximate.
GapCheck verify_gap(const Environment& env, const ContextModel& model, double claimed_gap,
                    std::span<const Vector> grid = {});

// R_T - (Delta* Qbar - C). Non-negative values certify the self-bounding
// inequality for the run.
double self_bounding_gap(double regret, double q_bar, double gap, double corruption);

}  // namespace bobw
