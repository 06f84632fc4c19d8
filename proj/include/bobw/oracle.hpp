#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bobw/context_model.hpp"
#include "bobw/environment.hpp"
#include "bobw/linalg.hpp"
#include "bobw/mgr.hpp"
#include "bobw/simplex.hpp"

// Brute-force reference computations. Nothing here is used by the agents;
// matrix products and inverses use their own loops.
namespace bobw::oracle {

// sum_x w(x) pi(a|x) x x^T over a finite support. Continuous models throw
// std::invalid_argument.
Matrix exact_sigma_ta(const ContextModel& model, const PolicySnapshot& policy, std::size_t arm);

// Gauss-Jordan with partial pivoting. Throws std::domain_error when the
// matrix is singular or its infinity-norm condition number exceeds 1e12.
Matrix exact_inverse(const Matrix& s);
double condition_number_inf(const Matrix& s, const Matrix& inverse);

// delta sum_{k=0}^{M} (I - delta sigma)^k by repeated multiplication.
Matrix mgr_expectation_closed_form(const Matrix& sigma_ta, double delta, std::size_t iterations);

// Minimizer of <L, q> - beta H(q) over the simplex by equality-constrained
// damped Newton steps. Throws std::runtime_error if the Newton decrement is
// still above tolerance after 1e5 iterations.
Distribution ftrl_argmin_numeric(std::span<const double> cumulative, double beta);
double ftrl_objective(std::span<const double> cumulative, double beta, std::span<const double> q);

struct BiasBound {
  double bound = 0.0;   // C_X C_Theta exp(-gamma delta lambda_min M / K)
  double target = 0.0;  // C_X C_Theta / T
  bool pass = false;
};

BiasBound bias_bound_eval(double gamma, double delta, double lambda_min, std::size_t iterations, std::size_t arms,
                          double context_bound, double param_bound, std::size_t horizon);

struct EntropyBound {
  double lhs = 0.0;  // sum_t H(q_t(x))
  double q_mass = 0.0;
  double rhs = 0.0;
  bool small_branch = false;  // Q <= e, rhs = e log(KT)
  bool pass = false;
};

// Q is the missing mass sum_t (1 - q_t(a*|x)).
EntropyBound entropy_bound_eval(double entropy_sum, double q_mass, std::size_t arms, std::size_t horizon);
EntropyBound entropy_bound_eval(std::span<const Distribution> q_trace, std::size_t optimal_arm, std::size_t horizon);

// E_x[sum_a pi(a|x) <x, theta(a)> - min_a <x, theta(a)>] over a finite
// support, lowest index on ties for the comparator.
double expected_round_regret(const ContextModel& model, const PolicySnapshot& policy, std::span<const Vector> params);

}  // namespace bobw::oracle
