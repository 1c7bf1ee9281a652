#pragma once

#include <cstdint>
#include <variant>

namespace teamcraft::world {

// SplitMix64. All simulation randomness is drawn from one instance per world,
// in simulation order, so a seed plus the action sequence fixes the outcome.
// Sampling helpers are implemented here instead of via <random> distributions
// because the standard leaves their algorithms unspecified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform integer in [lo, hi]; lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform double in [0, 1).
  double uniform01();
  // Number of Bernoulli(p) trials up to and including the first success.
  std::int64_t geometric(double p);

  std::uint64_t state() const { return state_; }
  bool operator==(const Rng&) const = default;

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

struct UniformDelay {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool operator==(const UniformDelay&) const = default;
};

// Per-tick success probability; the delay is the tick of the first success.
struct GeometricDelay {
  double p = 0.05;
  bool operator==(const GeometricDelay&) const = default;
};

using DelayDistribution = std::variant<UniformDelay, GeometricDelay>;

std::int64_t sample_delay(const DelayDistribution& dist, Rng& rng);
std::int64_t min_delay(const DelayDistribution& dist);

}  // namespace teamcraft::world
