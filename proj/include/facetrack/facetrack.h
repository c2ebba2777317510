/* facetrack — EKF/UKF toolkit for 3D landmark tracking.
 *
 * C API of the shared library. Handles are opaque; every function that can
 * fail returns an ftk_status, with a human-readable message available from
 * ftk_last_error() on the calling thread until the next facetrack call.
 * Matrices are passed as dense row-major double buffers.
 */
#ifndef FACETRACK_H
#define FACETRACK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FTK_API __declspec(dllexport)
#else
#define FTK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ftk_status {
  FTK_OK = 0,
  FTK_ERR_INVALID_ARGUMENT = 1,
  FTK_ERR_DIMENSION = 2,
  FTK_ERR_INVALID_STATE = 3, /* non-finite input */
  FTK_ERR_PARSE = 4,
  FTK_ERR_IO = 5,
  FTK_ERR_CONFIG = 6,
  FTK_ERR_SINGULAR = 7, /* innovation covariance not invertible */
  FTK_ERR_NOT_PSD = 8,  /* covariance not positive semi-definite */
  FTK_ERR_NUMERIC = 9,  /* non-finite values produced while filtering */
} ftk_status;

FTK_API const char* ftk_status_name(ftk_status status);
FTK_API const char* ftk_last_error(void);
FTK_API const char* ftk_version(void);

/* ---------------------------------------------------------------------------
 * Filters. Both kinds share one handle type; predict/update advance the
 * held state in place.
 */
typedef struct ftk_filter ftk_filter;

/* State transition x -> out, both of length n. */
typedef void (*ftk_transition_fn)(const double* x, size_t n, double dt, double* out,
                                  void* user);
/* Measurement h(x) -> out of length m. */
typedef void (*ftk_measurement_fn)(const double* x, size_t n, double* out, size_t m,
                                   void* user);

/* p0 is row-major state_dim x state_dim; NULL means the identity. */
FTK_API ftk_status ftk_ekf_create(size_t state_dim, const double* x0, const double* p0,
                                  ftk_filter** out);
FTK_API ftk_status ftk_ukf_create(size_t state_dim, const double* x0, const double* p0,
                                  double lambda, ftk_filter** out);
FTK_API void ftk_filter_free(ftk_filter* filter);
FTK_API size_t ftk_filter_dim(const ftk_filter* filter);

/* f == NULL selects the constant-position model. For the EKF, Jacobians of a
 * user transition are taken by central finite differences (eps = 1e-6).
 * q is row-major n x n; NULL means zero process noise. */
FTK_API ftk_status ftk_filter_predict(ftk_filter* filter, ftk_transition_fn f, void* user,
                                      double dt, const double* q);

/* h == NULL selects the identity measurement (requires m == state dim).
 * r is row-major m x m and must be provided. */
FTK_API ftk_status ftk_filter_update(ftk_filter* filter, const double* z, size_t m,
                                     ftk_measurement_fn h, void* user, const double* r);

FTK_API ftk_status ftk_filter_mean(const ftk_filter* filter, double* out);
FTK_API ftk_status ftk_filter_cov(const ftk_filter* filter, double* out); /* row-major n*n */

/* ---------------------------------------------------------------------------
 * Trajectories: ordered landmark frames, coordinates in millimeters.
 */
typedef struct ftk_trajectory ftk_trajectory;

/* points == 0 selects the default landmark count (54). */
FTK_API ftk_status ftk_trajectory_load(const char* const* paths, size_t n_paths,
                                       size_t points, double dt, const char* user_label,
                                       ftk_trajectory** out);
/* data holds n_frames * 3*points doubles, frame-major then landmark-major. */
FTK_API ftk_status ftk_trajectory_create(size_t points, size_t n_frames, const double* data,
                                         double dt, const char* user_label,
                                         ftk_trajectory** out);
FTK_API void ftk_trajectory_free(ftk_trajectory* trajectory);
FTK_API size_t ftk_trajectory_frames(const ftk_trajectory* trajectory);
FTK_API size_t ftk_trajectory_points(const ftk_trajectory* trajectory);
/* out receives 3*points doubles in landmark-major order. */
FTK_API ftk_status ftk_trajectory_frame(const ftk_trajectory* trajectory, size_t frame,
                                        double* out);

/* ---------------------------------------------------------------------------
 * Experiments.
 */
typedef struct ftk_config {
  double dt;
  double lambda;
  double q_det;
  double r_det;
  double sigma_velocity;
  double sigma_process;
  double sigma_measurement;
  double initial_cov_scale;
  uint64_t seed;
  uint32_t realizations;
} ftk_config;

FTK_API void ftk_config_default(ftk_config* config);

typedef struct ftk_result ftk_result;

FTK_API ftk_status ftk_run_deterministic(const ftk_trajectory* trajectory,
                                         const ftk_config* config, ftk_result** ekf_out,
                                         ftk_result** ukf_out);
FTK_API ftk_status ftk_run_stochastic(const ftk_trajectory* trajectory,
                                      const ftk_config* config, ftk_result** ekf_out,
                                      ftk_result** ukf_out);
FTK_API void ftk_result_free(ftk_result* result);
FTK_API size_t ftk_result_frames(const ftk_result* result);
FTK_API const char* ftk_result_filter_label(const ftk_result* result);
FTK_API const char* ftk_result_user_label(const ftk_result* result);
FTK_API ftk_status ftk_result_mse(const ftk_result* result, size_t frame, double* out);
FTK_API ftk_status ftk_result_mae(const ftk_result* result, size_t frame, double* out);
/* out receives the 3*points estimate for the frame. */
FTK_API ftk_status ftk_result_estimate(const ftk_result* result, size_t frame, double* out);

typedef struct ftk_comparison {
  double ekf_mean_mse;
  double ukf_mean_mse;
  double mse_ratio; /* ukf_mean / ekf_mean; 1.0 when both are zero */
  uint32_t ekf_wins;
  uint32_t ukf_wins;
  uint32_t ties;
} ftk_comparison;

FTK_API ftk_status ftk_compare(const ftk_result* ekf, const ftk_result* ukf,
                               ftk_comparison* out);

/* ---------------------------------------------------------------------------
 * Serialization and tooling.
 */
FTK_API ftk_status ftk_write_results_csv(const ftk_result* const* results, size_t count,
                                         const char* path, const char* const* comment_lines,
                                         size_t n_comments);
/* mode ("deterministic" or "stochastic") labels the echoed config; NULL
 * defaults to "deterministic". */
FTK_API ftk_status ftk_write_results_json(const ftk_result* const* results, size_t count,
                                          const char* path, const ftk_config* config,
                                          const char* mode, const char* const* inputs,
                                          size_t n_inputs);
FTK_API ftk_status ftk_write_estimates_csv(const ftk_trajectory* truth,
                                           const ftk_result* const* results, size_t count,
                                           const char* path,
                                           const char* const* comment_lines,
                                           size_t n_comments);

/* Writes `frames` landmark files plus manifest.json into dir. Zero amplitude,
 * frequency or dt select the defaults (0.25 mm, 0.5 Hz, 0.01 s). */
FTK_API ftk_status ftk_synth_generate(const char* dir, size_t points, size_t frames,
                                      uint64_t seed, double dt, double amplitude_mm,
                                      double frequency_hz);

/* FTK_OK iff the file parses as `expected_points` rows of 3 finite reals. */
FTK_API ftk_status ftk_validate_file(const char* path, size_t expected_points);

/* Tidy long-format report; landmark < 0 disables coordinate traces. */
FTK_API ftk_status ftk_report_generate(const char* results_csv, const char* estimates_csv,
                                       int landmark, const char* coord, const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FACETRACK_H */
