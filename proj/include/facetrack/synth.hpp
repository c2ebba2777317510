#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facetrack/dataio.hpp"

namespace facetrack {

// Synthetic landmark trajectories: a seeded random base layout with smooth
// sinusoidal per-axis drift, so the harness runs without the licensed dataset.
struct SynthConfig {
  int points = kDefaultLandmarkCount;
  int frames = 12;
  std::uint64_t seed = 0;
  double dt = 0.01;             // seconds between frames
  double amplitude_mm = 0.25;   // drift amplitude per axis
  double frequency_hz = 0.5;    // drift frequency
  double base_extent_mm = 100.0;  // base coordinates drawn uniformly in ±extent

  void validate() const;
};

Trajectory make_synthetic_trajectory(const SynthConfig& config,
                                     const std::string& user_label = "synthetic");

// Writes frame_###.txt files plus manifest.json into `dir`; returns the frame
// file paths in order.
std::vector<std::string> write_synthetic_trajectory(const SynthConfig& config,
                                                    const std::string& dir);

}  // namespace facetrack
