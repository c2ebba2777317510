#include "facetrack/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "facetrack/errors.hpp"
#include "facetrack/rng.hpp"

namespace facetrack {

void SynthConfig::validate() const {
  if (points < 1) throw ConfigError("synth: points must be >= 1");
  if (frames < 1) throw ConfigError("synth: frames must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("synth: dt must be positive");
  if (amplitude_mm < 0.0) throw ConfigError("synth: amplitude must be nonnegative");
  if (frequency_hz < 0.0) throw ConfigError("synth: frequency must be nonnegative");
  if (!(base_extent_mm > 0.0)) throw ConfigError("synth: base extent must be positive");
}

Trajectory make_synthetic_trajectory(const SynthConfig& config, const std::string& user_label) {
  config.validate();

  SplitMix64 base_rng(derive_stream_seed(config.seed, 0, NoisePurpose::synth_base));
  SplitMix64 motion_rng(derive_stream_seed(config.seed, 0, NoisePurpose::synth_motion));

  std::vector<Eigen::Vector3d> base(config.points);
  for (Eigen::Vector3d& p : base) {
    for (int c = 0; c < 3; ++c) {
      p(c) = (2.0 * base_rng.next_half_open() - 1.0) * config.base_extent_mm;
    }
  }
  // Per landmark, per axis: a phase and an amplitude factor in [0.5, 1].
  std::vector<Eigen::Vector3d> phase(config.points);
  std::vector<Eigen::Vector3d> amp(config.points);
  for (int i = 0; i < config.points; ++i) {
    for (int c = 0; c < 3; ++c) {
      phase[i](c) = motion_rng.next_half_open() * 2.0 * std::numbers::pi;
      amp[i](c) = config.amplitude_mm * (0.5 + 0.5 * motion_rng.next_half_open());
    }
  }

  Trajectory trajectory;
  trajectory.user_label = user_label;
  trajectory.dt = config.dt;
  trajectory.frames.reserve(config.frames);
  const double omega = 2.0 * std::numbers::pi * config.frequency_hz;
  for (int k = 0; k < config.frames; ++k) {
    LandmarkFrame frame;
    frame.frame_index = k;
    frame.landmarks.resize(config.points);
    const double t = k * config.dt;
    for (int i = 0; i < config.points; ++i) {
      for (int c = 0; c < 3; ++c) {
        frame.landmarks[i](c) = base[i](c) + amp[i](c) * std::sin(omega * t + phase[i](c));
      }
    }
    trajectory.frames.push_back(std::move(frame));
  }
  return trajectory;
}

std::vector<std::string> write_synthetic_trajectory(const SynthConfig& config,
                                                    const std::string& dir) {
  const Trajectory trajectory = make_synthetic_trajectory(config);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("synth: cannot create directory '" + dir + "': " + ec.message());

  std::vector<std::string> paths;
  paths.reserve(trajectory.frames.size());
  for (const LandmarkFrame& frame : trajectory.frames) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03d.txt", frame.frame_index);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("synth: cannot open '" + path + "' for writing");
    serialize_landmark_frame(frame, out);
    if (!out) throw IoError("synth: write to '" + path + "' failed");
    paths.push_back(path);
  }

  nlohmann::json manifest;
  manifest["points"] = config.points;
  manifest["frames"] = config.frames;
  manifest["seed"] = config.seed;
  manifest["dt"] = config.dt;
  manifest["amplitude_mm"] = config.amplitude_mm;
  manifest["frequency_hz"] = config.frequency_hz;
  manifest["base_extent_mm"] = config.base_extent_mm;
  nlohmann::json files = nlohmann::json::array();
  for (const std::string& p : paths) {
    files.push_back(std::filesystem::path(p).filename().string());
  }
  manifest["files"] = std::move(files);

  const std::string manifest_path = (std::filesystem::path(dir) / "manifest.json").string();
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("synth: cannot open '" + manifest_path + "' for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("synth: write to '" + manifest_path + "' failed");
  return paths;
}

}  // namespace facetrack
