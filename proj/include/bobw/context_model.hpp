#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bobw/linalg.hpp"
#include "bobw/rng.hpp"

namespace bobw {

enum class ContextKind { discrete, scaled_sphere };

// Known context distribution with exact second moment.
//
// discrete:      finite support points with weights summing to 1 (within
//                1e-9; the remainder is renormalized away).
// scaled_sphere: Gaussian direction normalized to the sphere of a fixed
//                radius; E[X X^T] = radius^2 / d * I.
//
// Construction rejects models whose covariance is not positive definite.
// The covariance, its smallest eigenvalue and the norm bound are cached.
class ContextModel {
 public:
  static ContextModel discrete(std::vector<Vector> points, std::vector<double> weights,
                               std::optional<double> norm_bound = std::nullopt);
  static ContextModel scaled_sphere(std::size_t dim, double radius);

  ContextKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == ContextKind::discrete; }
  std::size_t dim() const { return dim_; }

  const Matrix& covariance() const { return sigma_; }
  double lambda_min() const { return lambda_min_; }
  double norm_bound() const { return norm_bound_; }
  double radius() const { return radius_; }

  // Discrete models only; empty otherwise.
  std::span<const Vector> support() const { return points_; }
  std::span<const double> weights() const { return weights_; }

  Vector sample(Rng& rng) const;
  // Writes a draw into `out` (size dim()). Discrete draws consume one
  // uniform; sphere draws consume dim() normals.
  void sample_into(Rng& rng, std::span<double> out) const;
  // Discrete models only.
  std::size_t sample_index(Rng& rng) const;

 private:
  ContextModel() = default;
  void finish();

  ContextKind kind_ = ContextKind::discrete;
  std::size_t dim_ = 0;
  std::vector<Vector> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double radius_ = 0.0;
  double norm_bound_ = 0.0;
  Matrix sigma_;
  double lambda_min_ = 0.0;
};

Matrix exact_covariance(const ContextModel& model);

}  // namespace bobw
