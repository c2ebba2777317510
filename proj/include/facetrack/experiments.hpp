#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "facetrack/dataio.hpp"
#include "facetrack/experiment_types.hpp"

namespace facetrack {

// Everything a single stochastic realization consumes. Both filters are fed
// these exact sequences so comparisons isolate filter behavior.
struct RealizationInputs {
  std::vector<Vec> measurements;  // one per frame
  std::vector<Vec> velocities;    // velocities[k-1] drives the predict into frame k
};

RealizationInputs make_realization_inputs(const Trajectory& trajectory,
                                          const ExperimentConfig& config,
                                          std::uint64_t realization_index);

// Both filters over the exact flattened frames: constant-position process,
// identity measurement, Q = q_det*I, R = r_det*I. Fully deterministic.
std::pair<FilterRunResult, FilterRunResult> run_deterministic(const Trajectory& trajectory,
                                                              const ExperimentConfig& config);

// Monte Carlo over seeded realizations: noisy measurements, per-step random
// velocity in the process model, Q = sigma_process²*I, R = sigma_measurement²*I
// (deterministic-mode floors apply when a sigma is exactly zero). MSE is
// against the noise-free frames; series are averaged across realizations.
std::pair<FilterRunResult, FilterRunResult> run_stochastic(const Trajectory& trajectory,
                                                           const ExperimentConfig& config);

FilterComparison compare_filters(const FilterRunResult& ekf, const FilterRunResult& ukf);

}  // namespace facetrack
