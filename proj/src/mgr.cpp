#include "bobw/mgr.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bobw {

namespace {
constexpr double kTailTolerance = 1e-18;
}

double mgr_step_size(double loss_bound, double context_bound) {
  if (!(loss_bound > 0.0) || !(context_bound > 0.0))
    throw std::invalid_argument("mgr_step_size: loss and context bounds must be positive");
  return 1.0 / (2.0 * loss_bound * context_bound);
}

Matrix mgr(const ContextModel& model, const PolicySnapshot& policy, std::size_t arm, const MgrConfig& cfg, Rng& rng,
           MgrStats* stats) {
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) throw std::invalid_argument("mgr: delta must be positive");
  if (arm >= policy.arms()) throw std::invalid_argument("mgr: arm out of range");
  const std::size_t d = model.dim();
  const double delta = cfg.delta;
  const std::size_t m = cfg.iterations;

  // V is kept row-major; S accumulates sum_k V_k. Between hits V is constant,
  // so its copies are added in one go when it next changes.
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
  std::vector<double> s(d * d, 0.0);
  std::vector<double> vx(d);
  std::vector<double> x(d);
  std::size_t pending = 0;

  const bool contracting = delta * model.norm_bound() * model.norm_bound() <= 2.0;
  std::vector<double> cache;
  if (model.is_discrete()) cache.assign(model.support().size(), -1.0);

  MgrStats local;
  std::size_t k = 0;
  for (; k < m; ++k) {
    double p = 0.0;
    std::span<const double> xk;
    if (model.is_discrete()) {
      const std::size_t idx = model.sample_index(rng);
      xk = model.support()[idx].values();
      if (cache[idx] < 0.0) cache[idx] = policy.play_probability(arm, xk);
      p = cache[idx];
    } else {
      model.sample_into(rng, x);
      xk = x;
      p = policy.play_probability(arm, xk);
    }
    const bool hit = rng.uniform() < p;
    if (hit) {
      ++local.hits;
      if (pending > 0) {
        const double c = static_cast<double>(pending);
        for (std::size_t i = 0; i < d * d; ++i) s[i] += c * v[i];
        pending = 0;
      }
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += v[i * d + j] * xk[j];
        vx[i] = acc;
      }
      for (std::size_t i = 0; i < d; ++i) {
        const double f = delta * vx[i];
        for (std::size_t j = 0; j < d; ++j) v[i * d + j] -= f * xk[j];
      }
    }
    ++pending;
    if (hit && contracting) {
      double fro = 0.0;
      for (double e : v) fro += e * e;
      fro = std::sqrt(fro);
      if (static_cast<double>(m - k - 1) * fro < kTailTolerance) {
        ++k;
        break;
      }
    }
  }
  if (pending > 0) {
    const double c = static_cast<double>(pending);
    for (std::size_t i = 0; i < d * d; ++i) s[i] += c * v[i];
  }
  local.iterations_run = k;
  if (stats) *stats = local;

  Matrix out(d);
  auto o = out.values();
  for (std::size_t i = 0; i < d * d; ++i) o[i] = delta * s[i];
  for (std::size_t i = 0; i < d; ++i) o[i * d + i] += delta;
  return out;
}

Vector estimate_theta(const Matrix& sigma_dagger, std::size_t played, std::size_t arm, std::span<const double> x,
                      double loss) {
  const std::size_t d = sigma_dagger.dim();
  if (x.size() != d) throw std::invalid_argument("estimate_theta: context dimension mismatch");
  Vector out(d);
  if (arm != played) return out;
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += sigma_dagger(i, j) * x[j];
    out[i] = acc * loss;
  }
  return out;
}

}  // namespace bobw
