#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bobw/oracle.hpp"
#include "bobw/policy.hpp"

using namespace bobw;

namespace {

// omega = C_l C_X = 1 and delta = 1/2.
ScheduleConstants unit_constants(std::size_t k, std::size_t d, std::size_t T, double lambda) {
  return ScheduleConstants{k, d, T, 1.0, 1.0, lambda};
}

std::vector<Vector> zero_estimates(std::size_t k, std::size_t d) { return std::vector<Vector>(k, Vector(d)); }

}  // namespace

TEST(Gibbs, Examples) {
  const std::vector<double> zero{0.0, 0.0, 0.0};
  EXPECT_EQ(gibbs(zero, 2.0), Distribution::uniform(3));
  const double beta = 3.7;
  const std::vector<double> s{0.0, beta * std::log(2.0)};
  const Distribution q = gibbs(s, beta);
  EXPECT_NEAR(q[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(q[1], 1.0 / 3.0, 1e-15);
  const Distribution num = oracle::ftrl_argmin_numeric(s, beta);
  EXPECT_NEAR(num[0], 2.0 / 3.0, 1e-9);
}

TEST(Gibbs, ShiftAndJointScaleInvariance) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> s(5), shifted(5), scaled(5);
    const double c = 100.0 * (rng.uniform() - 0.5), k = 0.1 + 10.0 * rng.uniform();
    for (std::size_t a = 0; a < 5; ++a) {
      s[a] = 10.0 * (rng.uniform() - 0.5);
      shifted[a] = s[a] + c;
      scaled[a] = k * s[a];
    }
    const Distribution q = gibbs(s, 1.3), qs = gibbs(shifted, 1.3), qk = gibbs(scaled, 1.3 * k);
    std::size_t best = 0;
    for (std::size_t a = 0; a < 5; ++a) {
      EXPECT_NEAR(q[a], qs[a], 1e-12);
      EXPECT_NEAR(q[a], qk[a], 1e-12);
      if (q[a] > q[best]) best = a;
    }
    // The most likely arm has the smallest score, whatever beta is.
    std::size_t smallest = 0;
    for (std::size_t a = 1; a < 5; ++a)
      if (s[a] < s[smallest]) smallest = a;
    EXPECT_EQ(best, smallest);
  }
}

TEST(Gibbs, ExtremeScoresStayValid) {
  const std::vector<double> s{0.0, 1e6, -1e6};
  const Distribution q = gibbs(s, 1e-3);
  EXPECT_NEAR(q[2], 1.0, 1e-12);
  EXPECT_GT(q[1], 0.0);
}

TEST(FtrlDist, UsesContextInnerProducts) {
  const std::vector<Vector> L{Vector{1, 0}, Vector{0, 1}};
  const double x[] = {2.0, 1.0};
  const std::vector<double> scores{2.0, 1.0};
  EXPECT_EQ(ftrl_dist(L, 0.5, x), gibbs(scores, 0.5));
}

TEST(Beta1, CorollaryMatchesFormula) {
  const auto c = unit_constants(2, 2, 3, 1.0);
  const double lt = std::log(3.0), lk = std::log(2.0);
  EXPECT_NEAR(beta_1(c, Beta1Mode::corollary), std::sqrt(2.0 * lt * (lt / (0.5 * 1.0 * lk) + 2.0)), 1e-12);
}

TEST(Beta1, EquationMatchesFormula) {
  const auto c = unit_constants(2, 2, 3, 1.0);
  EXPECT_NEAR(beta_1(c, Beta1Mode::equation), std::sqrt(std::log(2.0 * 2.0 * 3.0) / std::log(2.0)), 1e-12);
}

TEST(ScheduleConstants, Validation) {
  EXPECT_THROW(unit_constants(1, 2, 10, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(unit_constants(2, 2, 1, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(unit_constants(2, 2, 10, 0.0).validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(unit_constants(2, 2, 10, 1.0).delta(), 0.5);
}

TEST(ExplorationRate, Examples) {
  const std::size_t T = 22026;  // log T ~ 10
  const auto c = unit_constants(2, 2, T, 0.5);
  EXPECT_NEAR(exploration_rate(c, 400.0), 2.0 * std::log(T) / (2.0 * 0.5 * 0.5 * 400.0), 1e-15);
  EXPECT_NEAR(exploration_rate(c, 400.0), 0.1, 1e-5);
  EXPECT_LT(exploration_rate(c, 1e12), 1e-9);
  EXPECT_EQ(exploration_rate(c, 1e-3), 1.0);
}

TEST(MgrIterations, BiasSafeIsSmallestSufficientCount) {
  for (std::size_t T : {10u, 1000u, 100000u}) {
    for (double gamma : {1.0, 0.3, 0.01}) {
      const auto c = unit_constants(3, 2, T, 0.25);
      const std::size_t m = mgr_iterations(c, 5.0, gamma, IterationSchedule::bias_safe);
      const double rate = gamma * 0.5 * 0.25 / 3.0;
      EXPECT_LE(std::exp(-rate * static_cast<double>(m)), 1.0 / static_cast<double>(T));
      ASSERT_GT(m, 0u);
      EXPECT_GT(std::exp(-rate * static_cast<double>(m - 1)), 1.0 / static_cast<double>(T));
    }
  }
}

TEST(MgrIterations, LiteralSchedule) {
  const auto c = unit_constants(2, 2, 100, 0.5);
  EXPECT_EQ(mgr_iterations(c, 3.2, 0.5, IterationSchedule::literal), 6u);
  EXPECT_EQ(mgr_iterations(c, 3.0, 0.5, IterationSchedule::literal), 5u);
}

TEST(NextBeta, Examples) {
  const double b1 = 2.5;
  EXPECT_DOUBLE_EQ(next_beta(b1, b1, 0.0, 2), 2.0 * b1);
  EXPECT_NEAR(next_beta(b1, b1, std::log(2.0), 2), b1 * (1.0 + 1.0 / std::sqrt(2.0)), 1e-14);
  double beta = b1, sh = 0.0, closed = 1.0;
  for (int u = 1; u <= 50; ++u) {
    sh += std::log(4.0);
    beta = next_beta(beta, b1, sh, 4);
    closed += 1.0 / std::sqrt(1.0 + u);
    EXPECT_NEAR(beta, b1 * closed, 1e-12);
  }
}

TEST(BobwAgent, FirstRoundIsUniform) {
  const auto c = unit_constants(3, 2, 100, 0.5);
  BobwAgent agent(c);
  const double x[] = {0.3, -0.4};
  std::vector<double> q(3), pi(3);
  agent.policy_into(x, q, pi);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_NEAR(q[a], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(pi[a], 1.0 / 3.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(agent.beta(), beta_1(c));
  EXPECT_EQ(agent.round(), 1u);
}

TEST(BobwAgent, ZeroEstimatesOnlyAdvanceBetaAndRound) {
  const auto c = unit_constants(2, 2, 100, 0.5);
  BobwAgent agent(c);
  const double x[] = {1.0, 0.0};
  Rng rng(2);
  const auto dec = agent.act(x, rng);
  const auto zero = zero_estimates(2, 2);
  agent.observe(dec, x, zero);
  EXPECT_EQ(agent.round(), 2u);
  EXPECT_NEAR(agent.beta(), agent.beta1() * (1.0 + 1.0 / std::sqrt(2.0)), 1e-12);
  for (const auto& l : agent.state().cumulative) EXPECT_EQ(l, Vector(2));
}

// Random estimates: mixing identity, gamma floor, beta monotone, entropy sum
// range and cumulative sums equal to the running total of estimates.
TEST(BobwAgent, PerRoundInvariants) {
  const auto c = unit_constants(4, 3, 1000, 0.2);
  BobwAgent agent(c);
  Rng rng(3);
  std::vector<Vector> total = zero_estimates(4, 3);
  double prev_beta = agent.beta();
  for (std::size_t t = 1; t <= 300; ++t) {
    Vector x{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
    const auto dec = agent.act(x.values(), rng);
    for (std::size_t a = 0; a < 4; ++a) {
      EXPECT_NEAR(dec.pi[a], (1.0 - dec.gamma) * dec.q[a] + dec.gamma / 4.0, 1e-12);
      EXPECT_GE(dec.pi[a], dec.gamma / 4.0 - 1e-15);
    }
    std::vector<Vector> est = zero_estimates(4, 3);
    est[dec.arm] = Vector{3.0 * (rng.uniform() - 0.5), 3.0 * (rng.uniform() - 0.5), 3.0 * (rng.uniform() - 0.5)};
    total[dec.arm] += est[dec.arm];
    agent.observe(dec, x.values(), est);
    EXPECT_GE(agent.beta(), prev_beta);
    EXPECT_GE(agent.beta(), agent.beta1());
    prev_beta = agent.beta();
    EXPECT_GE(agent.state().entropy_sum, 0.0);
    EXPECT_LE(agent.state().entropy_sum, static_cast<double>(t) * std::log(4.0) + 1e-9);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(agent.state().cumulative[a][i], total[a][i], 1e-12);
    EXPECT_GE(agent.gamma(), 0.0);
    EXPECT_LE(agent.gamma(), 1.0);
    EXPECT_DOUBLE_EQ(agent.gamma(), exploration_rate(c, agent.beta()));
    EXPECT_EQ(agent.iterations(), mgr_iterations(c, agent.beta(), agent.gamma()));
  }
}

TEST(BobwAgent, ReplayDeterminism) {
  const auto c = unit_constants(3, 2, 100, 0.5);
  BobwAgent a(c), b(c);
  Rng ra(4), rb(4);
  for (int t = 0; t < 50; ++t) {
    const double x[] = {0.5, -0.5};
    const auto da = a.act(x, ra), db = b.act(x, rb);
    ASSERT_EQ(da.arm, db.arm);
    std::vector<Vector> est = zero_estimates(3, 2);
    est[da.arm] = Vector{0.1 * t, -0.2};
    a.observe(da, x, est);
    b.observe(db, x, est);
    ASSERT_EQ(a.state().cumulative, b.state().cumulative);
    ASSERT_EQ(a.beta(), b.beta());
  }
}

TEST(BobwAgent, FullExplorationPlaysUniformly) {
  const auto c = unit_constants(2, 1, 100, 1.0);
  BobwOptions opt;
  opt.fixed = FixedSchedule{0.5, 1.0, 3};
  BobwAgent agent(c, opt);
  const double x[] = {1.0};
  Rng rng(5);
  auto dec = agent.act(x, rng);
  agent.observe(dec, x, std::vector<Vector>{Vector{10.0}, Vector{0.0}});
  std::vector<double> q(2), pi(2);
  agent.policy_into(x, q, pi);
  EXPECT_LT(q[0], 1e-6);
  EXPECT_DOUBLE_EQ(pi[0], 0.5);
  EXPECT_DOUBLE_EQ(pi[1], 0.5);
  EXPECT_DOUBLE_EQ(agent.beta(), 0.5);
  EXPECT_EQ(agent.iterations(), 3u);
}

TEST(BobwAgent, RejectsBadInputs) {
  const auto c = unit_constants(2, 2, 100, 0.5);
  BobwAgent agent(c);
  const double x[] = {1.0, 0.0};
  Rng rng(6);
  const auto dec = agent.act(x, rng);
  EXPECT_THROW(agent.observe(dec, x, zero_estimates(3, 2)), std::invalid_argument);
  BobwOptions bad;
  bad.beta1_override = -1.0;
  EXPECT_THROW(BobwAgent(c, bad), std::invalid_argument);
}

TEST(RealLinExp3, TunedParameters) {
  const auto c = unit_constants(2, 2, 10000, 0.5);
  const auto p = tuned_real_lin_exp3(c);
  EXPECT_NEAR(p.eta, std::sqrt(std::log(2.0) / (3.0 * 2 * 2 * 10000)), 1e-15);
  EXPECT_DOUBLE_EQ(p.gamma, exploration_rate(c, 1.0 / p.eta));
  EXPECT_EQ(p.iterations, mgr_iterations(c, 1.0 / p.eta, p.gamma));
}

TEST(RealLinExp3, TinyEtaIsUniform) {
  const auto c = unit_constants(3, 1, 100, 1.0);
  RealLinExp3Agent agent(c, RealLinExp3Params{1e-12, 0.0, 1});
  const double x[] = {1.0};
  Rng rng(7);
  const auto dec = agent.act(x, rng);
  agent.observe(dec, x, std::vector<Vector>{Vector{1.0}, Vector{0.0}, Vector{-1.0}});
  std::vector<double> q(3), pi(3);
  agent.policy_into(x, q, pi);
  for (double v : q) EXPECT_NEAR(v, 1.0 / 3.0, 1e-9);
}

TEST(UniformAgent, AlwaysUniform) {
  UniformAgent agent(4);
  const double x[] = {1.0, 2.0};
  std::vector<double> q(4), pi(4);
  agent.policy_into(x, q, pi);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(pi[a], 0.25);
  EXPECT_FALSE(agent.uses_estimates());
}

TEST(Enums, RoundTrip) {
  for (auto m : {Beta1Mode::corollary, Beta1Mode::equation}) EXPECT_EQ(parse_beta1_mode(to_string(m)), m);
  for (auto s : {IterationSchedule::bias_safe, IterationSchedule::literal})
    EXPECT_EQ(parse_iteration_schedule(to_string(s)), s);
  EXPECT_THROW(parse_beta1_mode("nope"), std::invalid_argument);
}
