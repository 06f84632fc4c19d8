#include "bobw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bobw {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same(size(), other.size(), "Vector::operator+=");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += other.v_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same(size(), other.size(), "Vector::operator-=");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= other.v_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : d_(rows.size()) {
  a_.reserve(d_ * d_);
  for (const auto& row : rows) {
    if (row.size() != d_) throw std::invalid_argument("Matrix: rows must form a square matrix");
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same(d_, other.d_, "Matrix::operator+=");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same(d_, other.d_, "Matrix::operator-=");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= other.a_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const Vector& a, const Vector& b) { return dot(a.values(), b.values()); }

Matrix outer(const Vector& a, const Vector& b) {
  require_same(a.size(), b.size(), "outer");
  const std::size_t d = a.size();
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = a[i] * b[j];
  return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  require_same(a.dim(), b.dim(), "mat_mul");
  const std::size_t d = a.dim();
  Matrix c(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector mat_vec(const Matrix& a, const Vector& x) {
  require_same(a.dim(), x.size(), "mat_vec");
  const std::size_t d = a.dim();
  Vector y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) t(j, i) = a(i, j);
  return t;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.values()) s += x * x;
  return std::sqrt(s);
}

double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (double x : a.values()) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const Vector& a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const Matrix& a) {
  const auto v = a.values();
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool is_symmetric(const Matrix& a, double tol) {
  const double scale = std::max(1.0, max_abs_entry(a));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol * scale) return false;
  return true;
}

std::vector<double> symmetric_eigenvalues(const Matrix& input) {
  if (!is_symmetric(input)) throw std::invalid_argument("symmetric_eigenvalues: matrix is not symmetric");
  const std::size_t n = input.dim();
  Matrix a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (input(i, j) + input(j, i));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off <= 1e-300) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigenvalue(const Matrix& a) {
  if (a.dim() == 0) throw std::invalid_argument("min_eigenvalue: empty matrix");
  return symmetric_eigenvalues(a).front();
}

double max_eigenvalue(const Matrix& a) {
  if (a.dim() == 0) throw std::invalid_argument("max_eigenvalue: empty matrix");
  return symmetric_eigenvalues(a).back();
}

double operator_norm(const Matrix& a) {
  if (a.dim() == 0) return 0.0;
  const double lmax = max_eigenvalue(mat_mul(transpose(a), a));
  return std::sqrt(std::max(0.0, lmax));
}

}  // namespace bobw
