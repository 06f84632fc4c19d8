#pragma once

#include <cstddef>

#include "bobw/context_model.hpp"
#include "bobw/environment.hpp"

// Reference problem instances shared by the verification suite, the
// acceptance tests and the example configs.
namespace bobw::instances {

struct Instance {
  ContextModel model;
  EnvironmentSpec spec;
  double gap = 0.0;  // certified Delta*, 0 when not applicable
};

// K = 2, d = 2. Contexts c e_1 and c e_2 with equal weight, base parameters
// (-a, a) and (a, -a) with 2ac = gap. Arm 0 is best at c e_1 and arm 1 at
// c e_2, both by exactly `gap`. ||theta_0|| = 1/2.
Instance two_arm_gap(double gap = 0.3, double noise = 0.0);

// The same base instance with its sign flipped for the first `rounds` rounds;
// the budget is set to exactly what the flip consumes.
Instance two_arm_sign_flip(std::size_t rounds, double gap = 0.3, double noise = 0.0);

// K = 3, d = 2 with the best-arm switcher. Contexts are e_1, e_2 and
// (e_1 + e_2)/sqrt(2) scaled by c.
Instance three_arm_switcher(double noise = 0.0);

}  // namespace bobw::instances
