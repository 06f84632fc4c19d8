#include "bobw/rng.hpp"

#include <cmath>
#include <numbers>

namespace bobw {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t round, Purpose purpose, std::uint64_t sub) {
  std::uint64_t k = mix64(seed + kGolden);
  k = mix64(k ^ (round * 0xD6E8FEB86659FD93ULL + 1));
  k = mix64(k ^ (static_cast<std::uint64_t>(purpose) * 0xA0761D6478BD642FULL));
  k = mix64(k ^ (sub * 0xE7037ED1A0B428DBULL + 7));
  return Rng(k);
}

Rng Rng::split(std::uint64_t tag) const { return Rng(mix64(key_ ^ mix64(tag + kGolden))); }

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bobw
