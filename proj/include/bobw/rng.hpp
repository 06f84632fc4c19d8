#pragma once

#include <cstdint>
#include <limits>

namespace bobw {

// Randomness purposes. Each (seed, round, purpose, sub) tuple names an
// independent stream, so resampling draws never shift environment draws.
enum class Purpose : std::uint64_t {
  context = 1,
  action = 2,
  mgr = 3,
  noise = 4,
  adversary = 5,
  probe = 6,
  test = 7,
  instance = 8,
};

// Counter-based generator. A stream is identified by a 64-bit key; the i-th
// output is the SplitMix64 finalizer applied to key + i * 0x9E3779B97F4A7C15.
// Streams are derived from parent keys by hashing, which makes the generator
// splittable and the output a pure function of (key, counter).
//
// Satisfies UniformRandomBitGenerator, but samplers in this library use
// uniform() / normal() directly so results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}

  static Rng stream(std::uint64_t seed, std::uint64_t round, Purpose purpose, std::uint64_t sub = 0);

  // Child stream; does not advance this one.
  Rng split(std::uint64_t tag) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal by Box-Muller; consumes two uniforms per call.
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace bobw
