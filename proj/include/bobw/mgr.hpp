#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "bobw/context_model.hpp"
#include "bobw/linalg.hpp"
#include "bobw/rng.hpp"

namespace bobw {

struct MgrConfig {
  double delta = 0.0;
  std::size_t iterations = 0;
};

// delta = 1 / (2 C_l C_X).
double mgr_step_size(double loss_bound, double context_bound);

// Read-only view of a round's play probabilities. MGR only needs
// pi_t(a|x) for the arm being estimated.
class PolicySnapshot {
 public:
  virtual ~PolicySnapshot() = default;
  virtual std::size_t arms() const = 0;
  virtual double play_probability(std::size_t arm, std::span<const double> x) const = 0;
};

// Adapter for tests and ad-hoc policies.
class FunctionPolicy final : public PolicySnapshot {
 public:
  using Fn = std::function<double(std::size_t arm, std::span<const double> x)>;
  FunctionPolicy(std::size_t arms, Fn fn) : arms_(arms), fn_(std::move(fn)) {}
  std::size_t arms() const override { return arms_; }
  double play_probability(std::size_t arm, std::span<const double> x) const override { return fn_(arm, x); }

 private:
  std::size_t arms_;
  Fn fn_;
};

struct MgrStats {
  std::size_t iterations_run = 0;  // below cfg.iterations when the product vanished
  std::size_t hits = 0;            // draws with V(k) = arm
};

// Matrix geometric resampling estimate of Sigma_{t,a}^{-1}:
//   delta I + delta sum_{k=1}^{M} V_k,  V_k = V_{k-1} (I - delta 1[V(k)=a] X(k) X(k)^T).
// Each step draws a fresh context and then decides V(k) = a with one uniform.
// For discrete models the play probability is evaluated once per support
// point. The loop stops early once the remaining terms cannot move any entry
// by more than 1e-18, which needs delta C_X^2 <= 2.
Matrix mgr(const ContextModel& model, const PolicySnapshot& policy, std::size_t arm, const MgrConfig& cfg, Rng& rng,
           MgrStats* stats = nullptr);

// theta_hat(a) = Sigma_dagger x loss if a is the played arm, zero otherwise.
Vector estimate_theta(const Matrix& sigma_dagger, std::size_t played, std::size_t arm, std::span<const double> x,
                      double loss);

inline double estimate_loss(const Vector& theta_hat, std::span<const double> x) { return dot(theta_hat.values(), x); }

}  // namespace bobw
