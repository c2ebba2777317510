#include "facetrack/facetrack.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "facetrack/dataio.hpp"
#include "facetrack/ekf.hpp"
#include "facetrack/errors.hpp"
#include "facetrack/experiments.hpp"
#include "facetrack/report.hpp"
#include "facetrack/synth.hpp"
#include "facetrack/ukf.hpp"

using facetrack::Mat;
using facetrack::Vec;

namespace {

thread_local std::string g_last_error;

ftk_status map_code(facetrack::ErrorCode code) {
  switch (code) {
    case facetrack::ErrorCode::invalid_argument: return FTK_ERR_INVALID_ARGUMENT;
    case facetrack::ErrorCode::dimension_mismatch: return FTK_ERR_DIMENSION;
    case facetrack::ErrorCode::invalid_state: return FTK_ERR_INVALID_STATE;
    case facetrack::ErrorCode::parse: return FTK_ERR_PARSE;
    case facetrack::ErrorCode::io: return FTK_ERR_IO;
    case facetrack::ErrorCode::config: return FTK_ERR_CONFIG;
    case facetrack::ErrorCode::singular_update: return FTK_ERR_SINGULAR;
    case facetrack::ErrorCode::not_psd: return FTK_ERR_NOT_PSD;
    case facetrack::ErrorCode::numeric: return FTK_ERR_NUMERIC;
  }
  return FTK_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
ftk_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FTK_OK;
  } catch (const facetrack::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FTK_ERR_NUMERIC;
  }
}

ftk_status fail_invalid(const char* message) {
  g_last_error = message;
  return FTK_ERR_INVALID_ARGUMENT;
}

Vec to_vec(const double* data, size_t n) {
  return Eigen::Map<const Vec>(data, static_cast<Eigen::Index>(n));
}

Mat to_mat(const double* data, size_t rows, size_t cols) {
  // C side is row-major.
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      data, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

facetrack::ExperimentConfig to_config(const ftk_config& c, facetrack::ExperimentMode mode) {
  facetrack::ExperimentConfig config;
  config.mode = mode;
  config.dt = c.dt;
  config.lambda = c.lambda;
  config.q_det = c.q_det;
  config.r_det = c.r_det;
  config.sigma_velocity = c.sigma_velocity;
  config.sigma_process = c.sigma_process;
  config.sigma_measurement = c.sigma_measurement;
  config.realizations = static_cast<int>(c.realizations);
  config.seed = c.seed;
  config.initial_cov_scale = c.initial_cov_scale;
  return config;
}

facetrack::ProcessModel wrap_transition(ftk_transition_fn f, void* user) {
  if (f == nullptr) return facetrack::constant_position_model();
  facetrack::ProcessModel model;
  model.transition = [f, user](const Vec& x, double dt) {
    Vec out = Vec::Zero(x.size());
    f(x.data(), static_cast<size_t>(x.size()), dt, out.data(), user);
    return out;
  };
  model.jacobian = [f, user](const Vec& x, double dt) {
    return facetrack::finite_difference_jacobian(
        [f, user, dt](const Vec& probe) {
          Vec out = Vec::Zero(probe.size());
          f(probe.data(), static_cast<size_t>(probe.size()), dt, out.data(), user);
          return out;
        },
        x);
  };
  model.name = "callback_transition";
  return model;
}

facetrack::MeasurementModel wrap_measurement(ftk_measurement_fn h, void* user, size_t m,
                                             size_t n) {
  if (h == nullptr) {
    if (m != n) {
      throw facetrack::DimensionError(
          "ftk_filter_update: identity measurement requires m == state dim");
    }
    return facetrack::identity_measurement_model(static_cast<Eigen::Index>(n));
  }
  facetrack::MeasurementModel model;
  model.dimension = static_cast<Eigen::Index>(m);
  auto observe = [h, user, m](const Vec& x) {
    Vec out = Vec::Zero(static_cast<Eigen::Index>(m));
    h(x.data(), static_cast<size_t>(x.size()), out.data(), m, user);
    return out;
  };
  model.observe = observe;
  model.jacobian = [observe](const Vec& x) {
    return facetrack::finite_difference_jacobian(observe, x);
  };
  model.name = "callback_measurement";
  return model;
}

}  // namespace

struct ftk_filter {
  enum class Kind { ekf, ukf } kind;
  facetrack::EkfState ekf;
  facetrack::GaussianEstimate ukf;
  facetrack::UkfConfig ukf_config;

  Eigen::Index dim() const {
    return kind == Kind::ekf ? ekf.mean.size() : ukf.mean.size();
  }
  const Vec& mean() const { return kind == Kind::ekf ? ekf.mean : ukf.mean; }
  const Mat& cov() const { return kind == Kind::ekf ? ekf.cov : ukf.cov; }
};

struct ftk_trajectory {
  facetrack::Trajectory value;
};

struct ftk_result {
  facetrack::FilterRunResult value;
};

namespace {

std::vector<facetrack::FilterRunResult> collect_results(const ftk_result* const* results,
                                                        size_t count) {
  std::vector<facetrack::FilterRunResult> list;
  list.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    if (results[i] == nullptr) {
      throw facetrack::InvalidArgumentError("results contains a NULL entry");
    }
    list.push_back(results[i]->value);
  }
  return list;
}

}  // namespace

extern "C" {

const char* ftk_status_name(ftk_status status) {
  switch (status) {
    case FTK_OK: return "ok";
    case FTK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FTK_ERR_DIMENSION: return "dimension_mismatch";
    case FTK_ERR_INVALID_STATE: return "invalid_state";
    case FTK_ERR_PARSE: return "parse_error";
    case FTK_ERR_IO: return "io_error";
    case FTK_ERR_CONFIG: return "config_error";
    case FTK_ERR_SINGULAR: return "singular_update";
    case FTK_ERR_NOT_PSD: return "not_psd";
    case FTK_ERR_NUMERIC: return "numeric_error";
  }
  return "unknown";
}

const char* ftk_last_error(void) { return g_last_error.c_str(); }

const char* ftk_version(void) { return "1.0.0"; }

/* ---- filters ------------------------------------------------------------ */

static ftk_status create_filter(ftk_filter::Kind kind, size_t state_dim, const double* x0,
                                const double* p0, double lambda, ftk_filter** out) {
  if (out == nullptr) return fail_invalid("out must not be NULL");
  *out = nullptr;
  if (x0 == nullptr) return fail_invalid("x0 must not be NULL");
  if (state_dim == 0) return fail_invalid("state_dim must be >= 1");
  return guarded([&]() {
    const Eigen::Index n = static_cast<Eigen::Index>(state_dim);
    Vec mean = to_vec(x0, state_dim);
    Mat cov = p0 != nullptr ? Mat(to_mat(p0, state_dim, state_dim)) : Mat(Mat::Identity(n, n));
    facetrack::require_finite(mean, "filter x0");
    facetrack::require_finite(cov, "filter p0");
    facetrack::require_symmetric(cov, "filter p0");
    auto filter = std::make_unique<ftk_filter>();
    filter->kind = kind;
    if (kind == ftk_filter::Kind::ekf) {
      filter->ekf = {std::move(mean), std::move(cov), 0};
    } else {
      filter->ukf_config = {lambda, n};
      facetrack::compute_weights(filter->ukf_config);  // validates n + lambda > 0
      filter->ukf = {std::move(mean), std::move(cov)};
    }
    *out = filter.release();
  });
}

ftk_status ftk_ekf_create(size_t state_dim, const double* x0, const double* p0,
                          ftk_filter** out) {
  return create_filter(ftk_filter::Kind::ekf, state_dim, x0, p0, 0.0, out);
}

ftk_status ftk_ukf_create(size_t state_dim, const double* x0, const double* p0, double lambda,
                          ftk_filter** out) {
  return create_filter(ftk_filter::Kind::ukf, state_dim, x0, p0, lambda, out);
}

void ftk_filter_free(ftk_filter* filter) { delete filter; }

size_t ftk_filter_dim(const ftk_filter* filter) {
  return filter == nullptr ? 0 : static_cast<size_t>(filter->dim());
}

ftk_status ftk_filter_predict(ftk_filter* filter, ftk_transition_fn f, void* user, double dt,
                              const double* q) {
  if (filter == nullptr) return fail_invalid("filter must not be NULL");
  return guarded([&]() {
    const Eigen::Index n = filter->dim();
    const Mat q_mat = q != nullptr
                          ? Mat(to_mat(q, static_cast<size_t>(n), static_cast<size_t>(n)))
                          : Mat(Mat::Zero(n, n));
    const facetrack::ProcessModel model = wrap_transition(f, user);
    if (filter->kind == ftk_filter::Kind::ekf) {
      filter->ekf = facetrack::ekf_predict(filter->ekf, model, q_mat, dt);
    } else {
      filter->ukf = facetrack::ukf_predict(filter->ukf, model, q_mat, dt, filter->ukf_config);
    }
  });
}

ftk_status ftk_filter_update(ftk_filter* filter, const double* z, size_t m,
                             ftk_measurement_fn h, void* user, const double* r) {
  if (filter == nullptr) return fail_invalid("filter must not be NULL");
  if (z == nullptr) return fail_invalid("z must not be NULL");
  if (r == nullptr) return fail_invalid("r must not be NULL");
  if (m == 0) return fail_invalid("m must be >= 1");
  return guarded([&]() {
    const Vec z_vec = to_vec(z, m);
    const Mat r_mat = to_mat(r, m, m);
    const facetrack::MeasurementModel model =
        wrap_measurement(h, user, m, static_cast<size_t>(filter->dim()));
    if (filter->kind == ftk_filter::Kind::ekf) {
      auto [updated, diagnostics] = facetrack::ekf_update(filter->ekf, z_vec, model, r_mat);
      (void)diagnostics;
      filter->ekf = std::move(updated);
    } else {
      auto [updated, diagnostics] =
          facetrack::ukf_update(filter->ukf, z_vec, model, r_mat, filter->ukf_config);
      (void)diagnostics;
      filter->ukf = std::move(updated);
    }
  });
}

ftk_status ftk_filter_mean(const ftk_filter* filter, double* out) {
  if (filter == nullptr || out == nullptr) return fail_invalid("filter/out must not be NULL");
  const Vec& mean = filter->mean();
  std::memcpy(out, mean.data(), sizeof(double) * static_cast<size_t>(mean.size()));
  g_last_error.clear();
  return FTK_OK;
}

ftk_status ftk_filter_cov(const ftk_filter* filter, double* out) {
  if (filter == nullptr || out == nullptr) return fail_invalid("filter/out must not be NULL");
  const Mat& cov = filter->cov();
  // row-major copy-out
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
      out[i * cov.cols() + j] = cov(i, j);
    }
  }
  g_last_error.clear();
  return FTK_OK;
}

/* ---- trajectories -------------------------------------------------------- */

ftk_status ftk_trajectory_load(const char* const* paths, size_t n_paths, size_t points,
                               double dt, const char* user_label, ftk_trajectory** out) {
  if (out == nullptr) return fail_invalid("out must not be NULL");
  *out = nullptr;
  if (paths == nullptr || n_paths == 0) return fail_invalid("at least one path is required");
  return guarded([&]() {
    std::vector<std::string> path_list(paths, paths + n_paths);
    const int expected = points == 0 ? facetrack::kDefaultLandmarkCount
                                     : static_cast<int>(points);
    auto trajectory = std::make_unique<ftk_trajectory>();
    trajectory->value = facetrack::load_trajectory(
        path_list, dt, user_label != nullptr ? user_label : "user0", expected);
    *out = trajectory.release();
  });
}

ftk_status ftk_trajectory_create(size_t points, size_t n_frames, const double* data, double dt,
                                 const char* user_label, ftk_trajectory** out) {
  if (out == nullptr) return fail_invalid("out must not be NULL");
  *out = nullptr;
  if (data == nullptr) return fail_invalid("data must not be NULL");
  if (points == 0 || n_frames == 0) return fail_invalid("points and n_frames must be >= 1");
  return guarded([&]() {
    auto trajectory = std::make_unique<ftk_trajectory>();
    trajectory->value.user_label = user_label != nullptr ? user_label : "user0";
    trajectory->value.dt = dt;
    const size_t stride = 3 * points;
    for (size_t k = 0; k < n_frames; ++k) {
      const Vec state = to_vec(data + k * stride, stride);
      facetrack::require_finite(state, "trajectory frame");
      trajectory->value.frames.push_back(
          facetrack::unflatten_state(state, static_cast<int>(k)));
    }
    *out = trajectory.release();
  });
}

void ftk_trajectory_free(ftk_trajectory* trajectory) { delete trajectory; }

size_t ftk_trajectory_frames(const ftk_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : trajectory->value.frames.size();
}

size_t ftk_trajectory_points(const ftk_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : static_cast<size_t>(trajectory->value.points());
}

ftk_status ftk_trajectory_frame(const ftk_trajectory* trajectory, size_t frame, double* out) {
  if (trajectory == nullptr || out == nullptr) {
    return fail_invalid("trajectory/out must not be NULL");
  }
  if (frame >= trajectory->value.frames.size()) return fail_invalid("frame out of range");
  return guarded([&]() {
    const Vec state = facetrack::flatten_frame(trajectory->value.frames[frame]);
    std::memcpy(out, state.data(), sizeof(double) * static_cast<size_t>(state.size()));
  });
}

/* ---- experiments ---------------------------------------------------------- */

void ftk_config_default(ftk_config* config) {
  if (config == nullptr) return;
  const facetrack::ExperimentConfig defaults;
  config->dt = defaults.dt;
  config->lambda = defaults.lambda;
  config->q_det = defaults.q_det;
  config->r_det = defaults.r_det;
  config->sigma_velocity = defaults.sigma_velocity;
  config->sigma_process = defaults.sigma_process;
  config->sigma_measurement = defaults.sigma_measurement;
  config->initial_cov_scale = defaults.initial_cov_scale;
  config->seed = defaults.seed;
  config->realizations = static_cast<uint32_t>(defaults.realizations);
}

static ftk_status run_experiment(const ftk_trajectory* trajectory, const ftk_config* config,
                                 facetrack::ExperimentMode mode, ftk_result** ekf_out,
                                 ftk_result** ukf_out) {
  if (ekf_out == nullptr || ukf_out == nullptr) {
    return fail_invalid("ekf_out/ukf_out must not be NULL");
  }
  *ekf_out = nullptr;
  *ukf_out = nullptr;
  if (trajectory == nullptr || config == nullptr) {
    return fail_invalid("trajectory/config must not be NULL");
  }
  return guarded([&]() {
    const facetrack::ExperimentConfig cpp_config = to_config(*config, mode);
    auto [ekf, ukf] = mode == facetrack::ExperimentMode::deterministic
                          ? facetrack::run_deterministic(trajectory->value, cpp_config)
                          : facetrack::run_stochastic(trajectory->value, cpp_config);
    *ekf_out = new ftk_result{std::move(ekf)};
    *ukf_out = new ftk_result{std::move(ukf)};
  });
}

ftk_status ftk_run_deterministic(const ftk_trajectory* trajectory, const ftk_config* config,
                                 ftk_result** ekf_out, ftk_result** ukf_out) {
  return run_experiment(trajectory, config, facetrack::ExperimentMode::deterministic, ekf_out,
                        ukf_out);
}

ftk_status ftk_run_stochastic(const ftk_trajectory* trajectory, const ftk_config* config,
                              ftk_result** ekf_out, ftk_result** ukf_out) {
  return run_experiment(trajectory, config, facetrack::ExperimentMode::stochastic, ekf_out,
                        ukf_out);
}

void ftk_result_free(ftk_result* result) { delete result; }

size_t ftk_result_frames(const ftk_result* result) {
  return result == nullptr ? 0 : result->value.mse.values.size();
}

const char* ftk_result_filter_label(const ftk_result* result) {
  return result == nullptr ? "" : result->value.filter_label.c_str();
}

const char* ftk_result_user_label(const ftk_result* result) {
  return result == nullptr ? "" : result->value.user_label.c_str();
}

ftk_status ftk_result_mse(const ftk_result* result, size_t frame, double* out) {
  if (result == nullptr || out == nullptr) return fail_invalid("result/out must not be NULL");
  if (frame >= result->value.mse.values.size()) return fail_invalid("frame out of range");
  *out = result->value.mse.values[frame];
  g_last_error.clear();
  return FTK_OK;
}

ftk_status ftk_result_mae(const ftk_result* result, size_t frame, double* out) {
  if (result == nullptr || out == nullptr) return fail_invalid("result/out must not be NULL");
  if (frame >= result->value.mae.values.size()) return fail_invalid("frame out of range");
  *out = result->value.mae.values[frame];
  g_last_error.clear();
  return FTK_OK;
}

ftk_status ftk_result_estimate(const ftk_result* result, size_t frame, double* out) {
  if (result == nullptr || out == nullptr) return fail_invalid("result/out must not be NULL");
  if (frame >= result->value.estimates.size()) return fail_invalid("frame out of range");
  const Vec& estimate = result->value.estimates[frame];
  std::memcpy(out, estimate.data(), sizeof(double) * static_cast<size_t>(estimate.size()));
  g_last_error.clear();
  return FTK_OK;
}

ftk_status ftk_compare(const ftk_result* ekf, const ftk_result* ukf, ftk_comparison* out) {
  if (ekf == nullptr || ukf == nullptr || out == nullptr) {
    return fail_invalid("ekf/ukf/out must not be NULL");
  }
  return guarded([&]() {
    const facetrack::FilterComparison comparison =
        facetrack::compare_filters(ekf->value, ukf->value);
    out->ekf_mean_mse = comparison.ekf_mean_mse;
    out->ukf_mean_mse = comparison.ukf_mean_mse;
    out->mse_ratio = comparison.mse_ratio;
    out->ekf_wins = static_cast<uint32_t>(comparison.ekf_wins);
    out->ukf_wins = static_cast<uint32_t>(comparison.ukf_wins);
    out->ties = static_cast<uint32_t>(comparison.ties);
  });
}

/* ---- serialization and tooling -------------------------------------------- */

ftk_status ftk_write_results_csv(const ftk_result* const* results, size_t count,
                                 const char* path, const char* const* comment_lines,
                                 size_t n_comments) {
  if (path == nullptr) return fail_invalid("path must not be NULL");
  if (count > 0 && results == nullptr) return fail_invalid("results must not be NULL");
  return guarded([&]() {
    std::vector<std::string> comments;
    for (size_t i = 0; i < n_comments; ++i) {
      comments.emplace_back(comment_lines[i] != nullptr ? comment_lines[i] : "");
    }
    facetrack::write_results_csv(collect_results(results, count), path, comments);
  });
}

ftk_status ftk_write_results_json(const ftk_result* const* results, size_t count,
                                  const char* path, const ftk_config* config,
                                  const char* mode, const char* const* inputs,
                                  size_t n_inputs) {
  if (path == nullptr) return fail_invalid("path must not be NULL");
  if (count > 0 && results == nullptr) return fail_invalid("results must not be NULL");
  if (mode != nullptr && std::strcmp(mode, "deterministic") != 0 &&
      std::strcmp(mode, "stochastic") != 0) {
    return fail_invalid("mode must be \"deterministic\" or \"stochastic\"");
  }
  return guarded([&]() {
    std::vector<std::string> input_list;
    for (size_t i = 0; i < n_inputs; ++i) {
      input_list.emplace_back(inputs[i] != nullptr ? inputs[i] : "");
    }
    const facetrack::ExperimentMode cpp_mode =
        mode != nullptr && std::strcmp(mode, "stochastic") == 0
            ? facetrack::ExperimentMode::stochastic
            : facetrack::ExperimentMode::deterministic;
    facetrack::ExperimentConfig cpp_config;
    const facetrack::ExperimentConfig* config_ptr = nullptr;
    if (config != nullptr) {
      cpp_config = to_config(*config, cpp_mode);
      config_ptr = &cpp_config;
    }
    facetrack::write_results_json(collect_results(results, count), path, config_ptr,
                                  input_list);
  });
}

ftk_status ftk_write_estimates_csv(const ftk_trajectory* truth,
                                   const ftk_result* const* results, size_t count,
                                   const char* path, const char* const* comment_lines,
                                   size_t n_comments) {
  if (truth == nullptr || path == nullptr) return fail_invalid("truth/path must not be NULL");
  if (count > 0 && results == nullptr) return fail_invalid("results must not be NULL");
  return guarded([&]() {
    std::vector<std::string> comments;
    for (size_t i = 0; i < n_comments; ++i) {
      comments.emplace_back(comment_lines[i] != nullptr ? comment_lines[i] : "");
    }
    facetrack::write_estimates_csv(truth->value, collect_results(results, count), path,
                                   comments);
  });
}

ftk_status ftk_synth_generate(const char* dir, size_t points, size_t frames, uint64_t seed,
                              double dt, double amplitude_mm, double frequency_hz) {
  if (dir == nullptr) return fail_invalid("dir must not be NULL");
  return guarded([&]() {
    facetrack::SynthConfig config;
    config.points = static_cast<int>(points);
    config.frames = static_cast<int>(frames);
    config.seed = seed;
    if (dt > 0.0) config.dt = dt;
    if (amplitude_mm > 0.0) config.amplitude_mm = amplitude_mm;
    if (frequency_hz > 0.0) config.frequency_hz = frequency_hz;
    facetrack::write_synthetic_trajectory(config, dir);
  });
}

ftk_status ftk_validate_file(const char* path, size_t expected_points) {
  if (path == nullptr) return fail_invalid("path must not be NULL");
  return guarded([&]() {
    std::ifstream in(path);
    if (!in) throw facetrack::IoError(std::string("cannot open '") + path + "'");
    const int expected = expected_points == 0 ? facetrack::kDefaultLandmarkCount
                                              : static_cast<int>(expected_points);
    try {
      facetrack::parse_landmark_file(in, expected);
    } catch (const facetrack::ParseError& e) {
      throw facetrack::ParseError(std::string(path) + ": " + e.what());
    }
  });
}

ftk_status ftk_report_generate(const char* results_csv, const char* estimates_csv,
                               int landmark, const char* coord, const char* out_path) {
  if (results_csv == nullptr || out_path == nullptr) {
    return fail_invalid("results_csv/out_path must not be NULL");
  }
  return guarded([&]() {
    facetrack::ReportOptions options;
    options.results_csv = results_csv;
    options.estimates_csv = estimates_csv != nullptr ? estimates_csv : "";
    options.landmark = landmark;
    options.coord = coord != nullptr ? coord : "";
    options.out_path = out_path;
    facetrack::generate_report(options);
  });
}

} /* extern "C" */
