#include "bobw/instances.hpp"

#include <cmath>

namespace bobw::instances {

namespace {

// ||theta_0|| = a sqrt(2) = 1/2.
constexpr double kParamNorm = 0.5;

double param_entry() { return kParamNorm / std::sqrt(2.0); }

}  // namespace

Instance two_arm_gap(double gap, double noise) {
  const double a = param_entry();
  const double c = gap / (2.0 * a);
  ContextModel model = ContextModel::discrete({Vector{c, 0.0}, Vector{0.0, c}}, {0.5, 0.5});
  EnvironmentSpec spec;
  spec.regime = Regime::stochastic;
  spec.base_params = {Vector{-a, a}, Vector{a, -a}};
  spec.noise_bound = noise;
  spec.param_bound = kParamNorm;
  return Instance{std::move(model), std::move(spec), gap};
}

Instance two_arm_sign_flip(std::size_t rounds, double gap, double noise) {
  Instance inst = two_arm_gap(gap, noise);
  inst.spec.regime = Regime::corrupted;
  inst.spec.strategy = Strategy::sign_flip;
  inst.spec.corrupt_rounds = rounds;
  // A flipped round moves the loss difference between the arms by 2 gap.
  inst.spec.corruption_budget = 2.0 * static_cast<double>(rounds) * gap;
  return inst;
}

Instance three_arm_switcher(double noise) {
  const double c = 0.3 / std::sqrt(2.0) / param_entry();
  const double h = c / std::sqrt(2.0);
  ContextModel model = ContextModel::discrete({Vector{c, 0.0}, Vector{0.0, c}, Vector{h, h}}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const double a = param_entry();
  EnvironmentSpec spec;
  spec.regime = Regime::adversarial;
  spec.strategy = Strategy::best_arm_switcher;
  spec.base_params = {Vector{-a, -a}, Vector{a, -a}, Vector{-a, a}};
  spec.noise_bound = noise;
  spec.param_bound = kParamNorm;
  return Instance{std::move(model), std::move(spec), 0.0};
}

}  // namespace bobw::instances
