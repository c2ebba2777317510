#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facetrack/metrics.hpp"
#include "facetrack/types.hpp"

namespace facetrack {

enum class ExperimentMode { deterministic, stochastic };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::deterministic;
  double dt = 0.01;      // seconds between frames
  double lambda = 1.0;   // UKF sigma-point spread
  double q_det = 1e-6;   // deterministic-mode process noise floor (mm²)
  double r_det = 1e-6;   // deterministic-mode measurement noise floor (mm²)
  double sigma_velocity = 1.0;      // mm/s
  double sigma_process = 0.1;       // mm
  double sigma_measurement = 0.5;   // mm
  int realizations = 100;           // stochastic mode only
  std::uint64_t seed = 0;
  double initial_cov_scale = 1.0;   // P₀ = scale * I (mm²)

  void validate() const;  // throws ConfigError
};

struct FilterRunResult {
  std::string filter_label;  // "EKF" or "UKF"
  std::string user_label;
  std::vector<Vec> estimates;     // one per frame, frame 0 is the initialization
  MseSeries mse;
  MseSeries mae;
  std::vector<Vec> innovations;   // one per update (frames 1..T-1); empty for averaged runs
};

struct FilterComparison {
  enum class Winner { ekf, ukf, tie };
  std::vector<Winner> per_frame;
  double ekf_mean_mse = 0.0;
  double ukf_mean_mse = 0.0;
  double mse_ratio = 1.0;  // ukf_mean / ekf_mean; 1.0 when both means are zero
  int ekf_wins = 0;
  int ukf_wins = 0;
  int ties = 0;
};

}  // namespace facetrack
