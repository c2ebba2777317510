#pragma once

#include <functional>
#include <utility>

#include "facetrack/statespace.hpp"

namespace facetrack {

struct UkfConfig {
  double lambda = 1.0;  // sigma-point spread; n + lambda must stay positive
  Eigen::Index state_dim = 0;
};

// 2n+1 sigma points stored column-wise with their weights.
//
// Weight convention: the covariance weights equal the mean weights,
// W(c) = W(m). The scaled (alpha, beta, kappa) parameterization is
// intentionally not used here.
struct SigmaPointSet {
  Mat points;        // state_dim x (2n+1), column i = χ_i
  Vec mean_weights;  // W(m)
  Vec cov_weights;   // W(c)
};

struct GaussianEstimate {
  Vec mean;
  Mat cov;
};

struct UkfUpdateDiagnostics {
  Vec innovation;             // y_k = z_k - ẑ
  Mat innovation_cov;         // S_k
  Mat cross_cov;              // P_xz
  Mat gain;                   // K_k = P_xz * S⁻¹
  Vec predicted_measurement;  // ẑ
};

// W(m)_0 = lambda/(n+lambda), W(m)_i = 1/(2(n+lambda)); W(c) = W(m).
std::pair<Vec, Vec> compute_weights(const UkfConfig& config);

// Lower-triangular L with L*Lᵀ = P, by Cholesky. On failure retries with
// P + 1e-9*I, then P + 1e-6*I; past that throws NotPsdError carrying the
// smallest eigenvalue.
Mat matrix_sqrt(const Mat& p);

// χ_0 = mean; χ_i = mean ± column i of sqrt((n+lambda)*cov).
SigmaPointSet generate_sigma_points(const Vec& mean, const Mat& cov,
                                    const UkfConfig& config);

struct UnscentedTransformResult {
  Vec mean;
  Mat cov;
  Mat transformed_points;  // f applied column-wise
};

// mean = Σ W(m)_i f(χ_i); cov = Σ W(c)_i (f(χ_i)-mean)(f(χ_i)-mean)ᵀ + additive_cov.
UnscentedTransformResult unscented_transform(const SigmaPointSet& points,
                                             const std::function<Vec(const Vec&)>& f,
                                             const Mat& additive_cov);

GaussianEstimate ukf_predict(const GaussianEstimate& state, const ProcessModel& model,
                             const Mat& q, double dt, const UkfConfig& config);

// Sigma points are regenerated from the predicted (mean, cov) before the
// measurement propagation, folding the process noise into the spread.
std::pair<GaussianEstimate, UkfUpdateDiagnostics> ukf_update(const GaussianEstimate& state,
                                                             const Vec& z,
                                                             const MeasurementModel& model,
                                                             const Mat& r,
                                                             const UkfConfig& config);

}  // namespace facetrack
