#pragma once

#include <cstdint>

namespace facetrack {

// SplitMix64 generator (Steele, Lea, Flood 2014). The algorithm is pinned so
// that a given seed reproduces the same stream on every platform; seeded
// experiment output must not depend on the standard library's RNG choices.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns 0 so log() stays finite.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform in [0, 1).
  double next_half_open() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the classic Box-Muller transform; the second deviate
  // of each pair is cached.
  double next_gaussian();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// One independent stream per (realization, purpose) pair.
enum class NoisePurpose : std::uint64_t {
  measurement = 1,  // additive measurement noise
  velocity = 2,     // per-step random velocity of the motion model
  synth_base = 3,   // base landmark layout of synthetic trajectories
  synth_motion = 4, // per-landmark drift phases/amplitudes
};

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t realization,
                                 NoisePurpose purpose);

}  // namespace facetrack
