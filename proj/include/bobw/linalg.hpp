#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bobw {

// Dense d-vector. Used for contexts and per-arm loss parameters.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  Vector(std::initializer_list<double> init) : v_(init) {}
  explicit Vector(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  const std::vector<double>& raw() const { return v_; }

  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> v_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);

// Square d x d matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t d, double fill = 0.0) : d_(d), a_(d * d, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t d);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return d_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

  std::span<double> values() { return a_; }
  std::span<const double> values() const { return a_; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t d_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

// All binary operations throw std::invalid_argument on dimension mismatch.
double dot(const Vector& a, const Vector& b);
double dot(std::span<const double> a, std::span<const double> b);
Matrix outer(const Vector& a, const Vector& b);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Vector mat_vec(const Matrix& a, const Vector& x);
Matrix transpose(const Matrix& a);

double norm2(const Vector& a);
double frobenius_norm(const Matrix& a);
double max_abs_entry(const Matrix& a);
bool all_finite(const Vector& a);
bool all_finite(const Matrix& a);

bool is_symmetric(const Matrix& a, double tol = 1e-12);

// Eigenvalues of a symmetric matrix, ascending. Cyclic Jacobi rotations;
// intended for the small dimensions used here (d <= 32).
// Throws std::invalid_argument if `a` is not symmetric.
std::vector<double> symmetric_eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);
double max_eigenvalue(const Matrix& a);

// Spectral norm, sqrt(lambda_max(A^T A)).
double operator_norm(const Matrix& a);

}  // namespace bobw
