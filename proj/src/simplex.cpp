#include "bobw/simplex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bobw {

Distribution::Distribution(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw std::invalid_argument("Distribution: empty");
  double sum = 0.0;
  for (double p : p_) {
    if (!std::isfinite(p) || p < -kExactTol || p > 1.0 + kExactTol)
      throw std::invalid_argument("Distribution: entry out of [0,1]: " + std::to_string(p));
    sum += p;
  }
  const double drift = std::abs(sum - 1.0);
  if (drift > kRenormTol)
    throw std::invalid_argument("Distribution: probabilities sum to " + std::to_string(sum));
  for (double& p : p_) p = std::max(0.0, p);
  if (drift > kExactTol) {
    const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
    for (double& p : p_) p /= total;
  }
}

Distribution Distribution::uniform(std::size_t k) {
  if (k == 0) throw std::invalid_argument("Distribution::uniform: k must be positive");
  return Distribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Distribution Distribution::point_mass(std::size_t k, std::size_t arm) {
  if (arm >= k) throw std::invalid_argument("Distribution::point_mass: arm out of range");
  std::vector<double> p(k, 0.0);
  p[arm] = 1.0;
  return Distribution(std::move(p));
}

double entropy(std::span<const double> q) {
  double h = 0.0;
  for (double p : q)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

std::size_t sample_categorical(std::span<const double> q, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (q[a] <= 0.0) continue;
    cum += q[a];
    last_positive = a;
    if (u < cum) return a;
  }
  // Rounding left u above the final cumulative sum.
  return last_positive;
}

Distribution mix_with_uniform(const Distribution& q, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("mix_with_uniform: gamma outside [0,1]");
  const double floor = gamma / static_cast<double>(q.size());
  std::vector<double> p(q.size());
  for (std::size_t a = 0; a < q.size(); ++a) p[a] = (1.0 - gamma) * q[a] + floor;
  return Distribution(std::move(p));
}

}  // namespace bobw
