#include <gtest/gtest.h>

#include <cmath>

#include "bobw/mgr.hpp"
#include "bobw/oracle.hpp"

using namespace bobw;

namespace {

const FunctionPolicy kAlways(1, [](std::size_t, std::span<const double>) { return 1.0; });

}  // namespace

TEST(MgrStepSize, Formula) { EXPECT_DOUBLE_EQ(mgr_step_size(2.0, 0.5), 1.0 / (2.0 * 2.0 * 0.5)); }

TEST(Mgr, ZeroIterationsIsScaledIdentity) {
  const auto m = ContextModel::discrete({Vector{1, 0}, Vector{0, 1}}, {0.5, 0.5});
  const FunctionPolicy half(2, [](std::size_t, std::span<const double>) { return 0.5; });
  Rng rng(1);
  EXPECT_EQ(mgr(m, half, 0, MgrConfig{0.25, 0}, rng), 0.25 * Matrix::identity(2));
}

TEST(Mgr, ScalarPointMassIsDeterministic) {
  const auto m = ContextModel::discrete({Vector{1}}, {1.0});
  Rng rng(2);
  const Matrix out = mgr(m, kAlways, 0, MgrConfig{0.5, 3}, rng);
  double series = 0.0;
  for (int k = 0; k <= 3; ++k) series += 0.5 * std::pow(0.5, k);
  EXPECT_EQ(out(0, 0), series);
  EXPECT_EQ(out(0, 0), 1.0 - std::pow(0.5, 4));
}

TEST(Mgr, MeanMatchesTruncatedSeries) {
  const auto m = ContextModel::discrete({Vector{1, 0}, Vector{0, 1}, Vector{0.6, 0.8}}, {0.5, 0.3, 0.2});
  const FunctionPolicy pol(2, [](std::size_t a, std::span<const double> x) {
    const double p0 = 0.3 + 0.5 * x[0];
    return a == 0 ? p0 : 1.0 - p0;
  });
  for (std::size_t arm = 0; arm < 2; ++arm) {
    const Matrix expected = oracle::mgr_expectation_closed_form(oracle::exact_sigma_ta(m, pol, arm), 0.5, 6);
    const int n = 20000;
    Matrix sum(2), sq(2);
    for (int i = 0; i < n; ++i) {
      Rng rng = Rng::stream(3, i, Purpose::mgr, arm);
      const Matrix s = mgr(m, pol, arm, MgrConfig{0.5, 6}, rng);
      sum += s;
      for (std::size_t k = 0; k < 4; ++k) sq.values()[k] += s.values()[k] * s.values()[k];
    }
    for (std::size_t k = 0; k < 4; ++k) {
      const double mean = sum.values()[k] / n;
      const double se = std::sqrt(std::max(0.0, sq.values()[k] / n - mean * mean) / n);
      EXPECT_NEAR(mean, expected.values()[k], 4.0 * se + 1e-12) << "arm " << arm << " entry " << k;
    }
  }
}

TEST(Mgr, OperatorNormBound) {
  const auto m = ContextModel::scaled_sphere(3, 1.0);
  const FunctionPolicy pol(3, [](std::size_t, std::span<const double>) { return 1.0 / 3.0; });
  for (std::size_t iters : {0u, 1u, 5u, 40u}) {
    for (int i = 0; i < 50; ++i) {
      Rng rng = Rng::stream(4, i, Purpose::mgr);
      const Matrix s = mgr(m, pol, 1, MgrConfig{0.5, iters}, rng);
      EXPECT_LE(operator_norm(s), 0.5 * static_cast<double>(iters + 1) + 1e-12);
    }
  }
}

TEST(Mgr, StatsAndEarlyExit) {
  const auto m = ContextModel::discrete({Vector{1}}, {1.0});
  Rng rng(5);
  MgrStats stats;
  // delta = 1 with a point mass zeroes the product after the first hit.
  const Matrix out = mgr(m, kAlways, 0, MgrConfig{1.0, 1000}, rng, &stats);
  EXPECT_EQ(out(0, 0), 1.0);
  EXPECT_LT(stats.iterations_run, 1000u);
  EXPECT_GE(stats.hits, 1u);
}

TEST(Mgr, SameStreamSameEstimate) {
  const auto m = ContextModel::scaled_sphere(2, 1.0);
  const FunctionPolicy pol(2, [](std::size_t, std::span<const double> x) { return 0.5 + 0.3 * x[0]; });
  Rng a(6), b(6);
  EXPECT_EQ(mgr(m, pol, 0, MgrConfig{0.4, 20}, a), mgr(m, pol, 0, MgrConfig{0.4, 20}, b));
}

TEST(EstimateTheta, Examples) {
  const double x1[] = {1.0};
  EXPECT_EQ(estimate_theta(Matrix{{0.9375}}, 0, 0, x1, 0.4), Vector{0.9375 * 1.0 * 0.4});
  EXPECT_EQ(estimate_theta(Matrix{{0.9375}}, 0, 1, x1, 0.4), Vector{0.0});
  const double x2[] = {1.0, 0.0};
  EXPECT_EQ(estimate_theta(Matrix::identity(2), 1, 1, x2, 1.0), (Vector{1, 0}));
}

TEST(EstimateLoss, Examples) {
  const double x[] = {1.0, 0.0};
  EXPECT_EQ(estimate_loss(Vector(2), x), 0.0);
  EXPECT_EQ(estimate_loss(Vector{0.375, -2}, x), 0.375);
}
