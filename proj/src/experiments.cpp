#include "facetrack/experiments.hpp"

#include <sstream>
#include <utility>

#include "facetrack/ekf.hpp"
#include "facetrack/errors.hpp"
#include "facetrack/rng.hpp"
#include "facetrack/ukf.hpp"
#include "parallel.hpp"

namespace facetrack {

void ExperimentConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(q_det > 0.0)) throw ConfigError("q_det must be > 0");
  if (!(r_det > 0.0)) throw ConfigError("r_det must be > 0");
  if (sigma_velocity < 0.0) throw ConfigError("sigma_velocity must be >= 0");
  if (sigma_process < 0.0) throw ConfigError("sigma_process must be >= 0");
  if (sigma_measurement < 0.0) throw ConfigError("sigma_measurement must be >= 0");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (!(initial_cov_scale > 0.0)) throw ConfigError("initial_cov_scale must be > 0");
}

namespace {

enum class FilterKind { ekf, ukf };

// One filter over one measurement sequence. velocities[k-1] is injected into
// the transition that predicts frame k; an empty list selects the
// constant-position model throughout.
FilterRunResult run_filter(const Trajectory& trajectory, const std::vector<Vec>& measurements,
                           const std::vector<Vec>& velocities, const Mat& q, const Mat& r,
                           const ExperimentConfig& config, FilterKind kind,
                           const std::string& context) {
  const int frames = trajectory.frame_count();
  const Eigen::Index dim = 3 * trajectory.points();

  FilterRunResult result;
  result.filter_label = kind == FilterKind::ekf ? "EKF" : "UKF";
  result.user_label = trajectory.user_label;
  result.mse.filter_label = result.filter_label;
  result.mse.user_label = trajectory.user_label;
  result.mae.filter_label = result.filter_label;
  result.mae.user_label = trajectory.user_label;
  result.estimates.reserve(frames);

  const MeasurementModel measurement = identity_measurement_model(dim);
  const UkfConfig ukf_config{config.lambda, dim};
  const Mat p0 = config.initial_cov_scale * Mat::Identity(dim, dim);

  // Both filters start at the first measurement, so the first innovation in
  // the identity-measurement experiments is zero.
  EkfState ekf_state{measurements[0], p0, 0};
  GaussianEstimate ukf_state{measurements[0], p0};

  auto record = [&](const Vec& estimate, int frame) {
    const Vec truth = flatten_frame(trajectory.frames[frame]);
    result.estimates.push_back(estimate);
    result.mse.values.push_back(mse_at_step(estimate, truth));
    result.mae.values.push_back(mae_at_step(estimate, truth));
  };
  record(measurements[0], 0);

  for (int k = 1; k < frames; ++k) {
    try {
      const ProcessModel process = velocities.empty()
                                       ? constant_position_model()
                                       : random_velocity_model(velocities[k - 1]);
      if (kind == FilterKind::ekf) {
        ekf_state = ekf_predict(ekf_state, process, q, config.dt);
        auto [updated, diagnostics] = ekf_update(ekf_state, measurements[k], measurement, r);
        ekf_state = std::move(updated);
        result.innovations.push_back(std::move(diagnostics.innovation));
        record(ekf_state.mean, k);
      } else {
        ukf_state = ukf_predict(ukf_state, process, q, config.dt, ukf_config);
        auto [updated, diagnostics] =
            ukf_update(ukf_state, measurements[k], measurement, r, ukf_config);
        ukf_state = std::move(updated);
        result.innovations.push_back(std::move(diagnostics.innovation));
        record(ukf_state.mean, k);
      }
    } catch (const NumericError& e) {
      throw NumericError(context + ", frame " + std::to_string(k) + ": " + e.what());
    } catch (const SingularUpdateError& e) {
      throw SingularUpdateError(context + ", frame " + std::to_string(k) + ": " + e.what());
    } catch (const NotPsdError& e) {
      throw NotPsdError(context + ", frame " + std::to_string(k) + ": " + e.what(),
                        e.smallest_eigenvalue);
    }
  }
  return result;
}

std::vector<Vec> exact_measurements(const Trajectory& trajectory) {
  std::vector<Vec> measurements;
  measurements.reserve(trajectory.frames.size());
  for (const LandmarkFrame& frame : trajectory.frames) {
    measurements.push_back(flatten_frame(frame));
  }
  return measurements;
}

// Noise floors apply only when a sigma is exactly zero, keeping the
// zero-noise stochastic run identical to the deterministic one while the
// update stays invertible.
double effective_variance(double sigma, double floor) {
  return sigma > 0.0 ? sigma * sigma : floor;
}

}  // namespace

RealizationInputs make_realization_inputs(const Trajectory& trajectory,
                                          const ExperimentConfig& config,
                                          std::uint64_t realization_index) {
  const Eigen::Index dim = 3 * trajectory.points();
  const NoiseSpec noise =
      NoiseSpec::isotropic(dim, config.sigma_process, config.sigma_measurement,
                           config.sigma_velocity);

  RealizationInputs inputs;
  inputs.measurements = synthesize_measurements(
      trajectory, noise,
      derive_stream_seed(config.seed, realization_index, NoisePurpose::measurement));

  SplitMix64 velocity_rng(
      derive_stream_seed(config.seed, realization_index, NoisePurpose::velocity));
  const int frames = trajectory.frame_count();
  inputs.velocities.reserve(frames > 0 ? frames - 1 : 0);
  for (int k = 1; k < frames; ++k) {
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      v(i) = config.sigma_velocity * velocity_rng.next_gaussian();
    }
    inputs.velocities.push_back(std::move(v));
  }
  return inputs;
}

std::pair<FilterRunResult, FilterRunResult> run_deterministic(const Trajectory& trajectory,
                                                              const ExperimentConfig& config) {
  config.validate();
  if (config.mode != ExperimentMode::deterministic) {
    throw ConfigError("run_deterministic: config mode is not deterministic");
  }
  if (trajectory.frames.empty()) throw ConfigError("run_deterministic: empty trajectory");

  const Eigen::Index dim = 3 * trajectory.points();
  const Mat q = config.q_det * Mat::Identity(dim, dim);
  const Mat r = config.r_det * Mat::Identity(dim, dim);
  const std::vector<Vec> measurements = exact_measurements(trajectory);
  const std::vector<Vec> no_velocities;

  FilterRunResult ekf = run_filter(trajectory, measurements, no_velocities, q, r, config,
                                   FilterKind::ekf, "deterministic");
  FilterRunResult ukf = run_filter(trajectory, measurements, no_velocities, q, r, config,
                                   FilterKind::ukf, "deterministic");
  return {std::move(ekf), std::move(ukf)};
}

std::pair<FilterRunResult, FilterRunResult> run_stochastic(const Trajectory& trajectory,
                                                           const ExperimentConfig& config) {
  config.validate();
  if (config.mode != ExperimentMode::stochastic) {
    throw ConfigError("run_stochastic: config mode is not stochastic");
  }
  if (trajectory.frames.empty()) throw ConfigError("run_stochastic: empty trajectory");

  const Eigen::Index dim = 3 * trajectory.points();
  const Mat q = effective_variance(config.sigma_process, config.q_det) * Mat::Identity(dim, dim);
  const Mat r =
      effective_variance(config.sigma_measurement, config.r_det) * Mat::Identity(dim, dim);

  const int realizations = config.realizations;
  std::vector<FilterRunResult> ekf_runs(realizations);
  std::vector<FilterRunResult> ukf_runs(realizations);

  detail::parallel_for_index(realizations, detail::default_worker_count(), [&](int r_index) {
    const RealizationInputs inputs =
        make_realization_inputs(trajectory, config, static_cast<std::uint64_t>(r_index));
    const std::string context = "realization " + std::to_string(r_index);
    // Both filters consume the same measurement and velocity draws.
    ekf_runs[r_index] = run_filter(trajectory, inputs.measurements, inputs.velocities, q, r,
                                   config, FilterKind::ekf, context);
    ukf_runs[r_index] = run_filter(trajectory, inputs.measurements, inputs.velocities, q, r,
                                   config, FilterKind::ukf, context);
  });

  auto aggregate = [&](std::vector<FilterRunResult>& runs) {
    FilterRunResult averaged;
    averaged.filter_label = runs[0].filter_label;
    averaged.user_label = runs[0].user_label;
    std::vector<MseSeries> mse_all, mae_all;
    mse_all.reserve(runs.size());
    mae_all.reserve(runs.size());
    for (const FilterRunResult& run : runs) {
      mse_all.push_back(run.mse);
      mae_all.push_back(run.mae);
    }
    averaged.mse = average_series(mse_all);
    averaged.mae = average_series(mae_all);

    const std::size_t frames = runs[0].estimates.size();
    averaged.estimates.assign(frames, Vec::Zero(dim));
    for (const FilterRunResult& run : runs) {
      for (std::size_t k = 0; k < frames; ++k) averaged.estimates[k] += run.estimates[k];
    }
    for (Vec& estimate : averaged.estimates) {
      estimate /= static_cast<double>(runs.size());
    }
    return averaged;
  };

  return {aggregate(ekf_runs), aggregate(ukf_runs)};
}

FilterComparison compare_filters(const FilterRunResult& ekf, const FilterRunResult& ukf) {
  if (ekf.mse.values.size() != ukf.mse.values.size()) {
    std::ostringstream msg;
    msg << "compare_filters: series lengths differ (" << ekf.mse.values.size() << " vs "
        << ukf.mse.values.size() << ")";
    throw DimensionError(msg.str());
  }
  FilterComparison comparison;
  const std::size_t frames = ekf.mse.values.size();
  comparison.per_frame.reserve(frames);
  double ekf_sum = 0.0;
  double ukf_sum = 0.0;
  for (std::size_t k = 0; k < frames; ++k) {
    ekf_sum += ekf.mse.values[k];
    ukf_sum += ukf.mse.values[k];
    if (ekf.mse.values[k] < ukf.mse.values[k]) {
      comparison.per_frame.push_back(FilterComparison::Winner::ekf);
      ++comparison.ekf_wins;
    } else if (ukf.mse.values[k] < ekf.mse.values[k]) {
      comparison.per_frame.push_back(FilterComparison::Winner::ukf);
      ++comparison.ukf_wins;
    } else {
      comparison.per_frame.push_back(FilterComparison::Winner::tie);
      ++comparison.ties;
    }
  }
  if (frames > 0) {
    comparison.ekf_mean_mse = ekf_sum / static_cast<double>(frames);
    comparison.ukf_mean_mse = ukf_sum / static_cast<double>(frames);
  }
  if (comparison.ekf_mean_mse == 0.0 && comparison.ukf_mean_mse == 0.0) {
    comparison.mse_ratio = 1.0;
  } else {
    comparison.mse_ratio = comparison.ukf_mean_mse / comparison.ekf_mean_mse;
  }
  return comparison;
}

}  // namespace facetrack
