#include <gtest/gtest.h>

#include <cmath>

#include "bobw/linalg.hpp"
#include "bobw/rng.hpp"

using namespace bobw;

namespace {

Matrix random_matrix(std::size_t d, Rng& rng) {
  Matrix m(d);
  for (double& v : m.values()) v = 2.0 * rng.uniform() - 1.0;
  return m;
}

Matrix random_symmetric(std::size_t d, Rng& rng) {
  Matrix a = random_matrix(d, rng);
  return 0.5 * (a + transpose(a));
}

}  // namespace

TEST(Dot, Examples) {
  EXPECT_EQ(dot(Vector{1, 0}, Vector{0, 1}), 0.0);
  EXPECT_EQ(dot(Vector{1, 2}, Vector{3, 4}), 1.0 * 3.0 + 2.0 * 4.0);
  EXPECT_EQ(dot(Vector{0.7, -2}, Vector(2)), 0.0);
  EXPECT_THROW(dot(Vector{1, 2}, Vector{1, 2, 3}), std::invalid_argument);
}

TEST(Outer, Examples) {
  EXPECT_EQ(outer(Vector{1, 0}, Vector{1, 0}), (Matrix{{1, 0}, {0, 0}}));
  EXPECT_EQ(outer(Vector{1, 2}, Vector{3, 4}), (Matrix{{1 * 3, 1 * 4}, {2 * 3, 2 * 4}}));
  EXPECT_EQ(outer(Vector(2), Vector{5, 6}), Matrix(2));
}

TEST(MatMul, IdentityAndPermutation) {
  Rng rng(3);
  const Matrix a = random_matrix(4, rng);
  EXPECT_EQ(mat_mul(a, Matrix::identity(4)), a);
  EXPECT_EQ(mat_mul(Matrix::identity(4), a), a);
  const Matrix p{{0, 1}, {1, 0}};
  EXPECT_EQ(mat_mul(p, p), Matrix::identity(2));
  EXPECT_THROW(mat_mul(Matrix(2), Matrix(3)), std::invalid_argument);
}

TEST(MatMul, AssociativeOnRandomMatrices) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Matrix a = random_matrix(3, rng), b = random_matrix(3, rng), c = random_matrix(3, rng);
    EXPECT_LT(max_abs_entry(mat_mul(mat_mul(a, b), c) - mat_mul(a, mat_mul(b, c))), 1e-12);
  }
}

TEST(MatVec, MatchesColumnSums) {
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(mat_vec(a, Vector{1, 1}), (Vector{3, 7}));
}

TEST(Norms, Basic) {
  EXPECT_DOUBLE_EQ(norm2(Vector{3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(frobenius_norm(Matrix{{1, 2}, {2, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(max_abs_entry(Matrix{{1, -7}, {2, 4}}), 7.0);
  EXPECT_TRUE(all_finite(Vector{1, 2}));
  EXPECT_FALSE(all_finite(Vector{1, NAN}));
}

TEST(MinEigenvalue, Examples) {
  EXPECT_DOUBLE_EQ(min_eigenvalue(Matrix::identity(3)), 1.0);
  const double d[] = {0.5, 2.0};
  EXPECT_DOUBLE_EQ(min_eigenvalue(Matrix::diagonal(d)), 0.5);
  EXPECT_NEAR(min_eigenvalue(Matrix{{2, 1}, {1, 2}}), 1.0, 1e-14);
  EXPECT_THROW(min_eigenvalue(Matrix{{1, 2}, {0, 1}}), std::invalid_argument);
}

// 2x2 eigenvalues from the characteristic polynomial.
TEST(SymmetricEigenvalues, AgreeWithCharacteristicPolynomial2x2) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Matrix s = random_symmetric(2, rng);
    const double tr = s(0, 0) + s(1, 1);
    const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const auto ev = symmetric_eigenvalues(s);
    EXPECT_NEAR(ev[0], tr / 2.0 - disc, 1e-12);
    EXPECT_NEAR(ev[1], tr / 2.0 + disc, 1e-12);
  }
}

// 3x3: each eigenvalue is a root of det(A - lambda I), and they sum to the trace.
TEST(SymmetricEigenvalues, RootsOfCharacteristicPolynomial3x3) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const Matrix s = random_symmetric(3, rng);
    const auto ev = symmetric_eigenvalues(s);
    double sum = 0.0;
    for (double l : ev) {
      const Matrix m = s - l * Matrix::identity(3);
      const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
      EXPECT_NEAR(det, 0.0, 1e-10);
      sum += l;
    }
    EXPECT_NEAR(sum, s(0, 0) + s(1, 1) + s(2, 2), 1e-12);
    EXPECT_LE(ev[0], ev[1]);
    EXPECT_LE(ev[1], ev[2]);
  }
}

TEST(OperatorNorm, MatchesLargestSingularValue) {
  EXPECT_NEAR(operator_norm(Matrix{{0, 2}, {0, 0}}), 2.0, 1e-12);
  EXPECT_NEAR(operator_norm(Matrix{{-3, 0}, {0, 1}}), 3.0, 1e-12);
}
