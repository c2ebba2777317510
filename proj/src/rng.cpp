#include "facetrack/rng.hpp"

#include <cmath>
#include <numbers>

namespace facetrack {

namespace {

// SplitMix64 finalizer used for stream derivation.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double SplitMix64::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = next_unit();
  const double u2 = next_half_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t realization,
                                 NoisePurpose purpose) {
  std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (realization + 0xbf58476d1ce4e5b9ULL));
  s = mix64(s ^ (static_cast<std::uint64_t>(purpose) + 0x94d049bb133111ebULL));
  return s;
}

}  // namespace facetrack
