#include "bobw/context_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bobw {

namespace {
constexpr double kPdTolerance = 1e-12;
}

ContextModel ContextModel::discrete(std::vector<Vector> points, std::vector<double> weights,
                                    std::optional<double> norm_bound) {
  if (points.empty()) throw std::invalid_argument("ContextModel: empty support");
  if (points.size() != weights.size())
    throw std::invalid_argument("ContextModel: support and weight counts differ");
  const std::size_t d = points.front().size();
  if (d == 0) throw std::invalid_argument("ContextModel: dimension must be positive");

  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw std::invalid_argument("ContextModel: support points differ in dimension");
    if (!all_finite(points[i])) throw std::invalid_argument("ContextModel: non-finite support point");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("ContextModel: weights must be positive");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("ContextModel: weights must sum to 1");
  for (double& w : weights) w /= total;

  ContextModel m;
  m.kind_ = ContextKind::discrete;
  m.dim_ = d;
  m.points_ = std::move(points);
  m.weights_ = std::move(weights);

  m.cumulative_.resize(m.weights_.size());
  std::partial_sum(m.weights_.begin(), m.weights_.end(), m.cumulative_.begin());
  m.cumulative_.back() = 1.0;

  double max_norm = 0.0;
  for (const Vector& x : m.points_) max_norm = std::max(max_norm, norm2(x));
  if (norm_bound) {
    if (*norm_bound < max_norm)
      throw std::invalid_argument("ContextModel: declared norm bound " + std::to_string(*norm_bound) +
                                  " is below the largest support norm " + std::to_string(max_norm));
    m.norm_bound_ = *norm_bound;
  } else {
    m.norm_bound_ = max_norm;
  }

  m.sigma_ = Matrix(d);
  for (std::size_t i = 0; i < m.points_.size(); ++i) m.sigma_ += m.weights_[i] * outer(m.points_[i], m.points_[i]);
  m.finish();
  return m;
}

ContextModel ContextModel::scaled_sphere(std::size_t dim, double radius) {
  if (dim == 0) throw std::invalid_argument("ContextModel: dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ContextModel: radius must be positive");
  ContextModel m;
  m.kind_ = ContextKind::scaled_sphere;
  m.dim_ = dim;
  m.radius_ = radius;
  m.norm_bound_ = radius;
  m.sigma_ = (radius * radius / static_cast<double>(dim)) * Matrix::identity(dim);
  m.finish();
  return m;
}

void ContextModel::finish() {
  lambda_min_ = min_eigenvalue(sigma_);
  const double scale = std::max(1.0, max_eigenvalue(sigma_));
  if (!(lambda_min_ > kPdTolerance * scale))
    throw std::invalid_argument("ContextModel: covariance is not positive definite (lambda_min = " +
                                std::to_string(lambda_min_) + ")");
}

std::size_t ContextModel::sample_index(Rng& rng) const {
  if (!is_discrete()) throw std::logic_error("ContextModel::sample_index: model is not discrete");
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), points_.size() - 1);
}

void ContextModel::sample_into(Rng& rng, std::span<double> out) const {
  if (out.size() != dim_) throw std::invalid_argument("ContextModel::sample_into: wrong output size");
  if (is_discrete()) {
    const auto src = points_[sample_index(rng)].values();
    std::copy(src.begin(), src.end(), out.begin());
    return;
  }
  double ss = 0.0;
  do {
    ss = 0.0;
    for (double& v : out) {
      v = rng.normal();
      ss += v * v;
    }
  } while (ss == 0.0);
  const double s = radius_ / std::sqrt(ss);
  for (double& v : out) v *= s;
}

Vector ContextModel::sample(Rng& rng) const {
  Vector x(dim_);
  sample_into(rng, x.values());
  return x;
}

Matrix exact_covariance(const ContextModel& model) { return model.covariance(); }

}  // namespace bobw
