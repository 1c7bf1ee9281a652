#include "teamcraft/world/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace teamcraft::world {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next_u64());
  const std::uint64_t range = span + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return lo + static_cast<std::int64_t>(v % range);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric: p must be in (0, 1]");
  if (p == 1.0) return 1;
  const double u = uniform01();
  return 1 + static_cast<std::int64_t>(std::floor(std::log1p(-u) / std::log1p(-p)));
}

std::int64_t sample_delay(const DelayDistribution& dist, Rng& rng) {
  if (const auto* u = std::get_if<UniformDelay>(&dist)) return rng.uniform_int(u->lo, u->hi);
  return rng.geometric(std::get<GeometricDelay>(dist).p);
}

std::int64_t min_delay(const DelayDistribution& dist) {
  if (const auto* u = std::get_if<UniformDelay>(&dist)) return u->lo;
  return 1;
}

}  // namespace teamcraft::world
