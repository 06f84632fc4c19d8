#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bobw/rng.hpp"

namespace bobw {

// Probability vector over K arms.
//
// Construction accepts inputs whose sum is within 1e-12 of one. Inputs off by
// less than 1e-9 are renormalized; anything further off, or any negative or
// non-finite entry, throws std::invalid_argument.
class Distribution {
 public:
  static constexpr double kExactTol = 1e-12;
  static constexpr double kRenormTol = 1e-9;

  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t k);
  static Distribution point_mass(std::size_t k, std::size_t arm);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t a) const { return p_[a]; }
  std::span<const double> probs() const { return p_; }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> p_;
};

// Shannon entropy in nats; 0 log(1/0) is taken as 0.
double entropy(std::span<const double> q);
inline double entropy(const Distribution& q) { return entropy(q.probs()); }

// Draws one uniform and inverts the cumulative distribution.
std::size_t sample_categorical(std::span<const double> q, Rng& rng);
inline std::size_t sample_categorical(const Distribution& q, Rng& rng) {
  return sample_categorical(q.probs(), rng);
}

// (1 - gamma) q + gamma / K.
Distribution mix_with_uniform(const Distribution& q, double gamma);

}  // namespace bobw
