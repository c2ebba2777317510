#include "facetrack/ukf.hpp"

#include <sstream>

#include "facetrack/errors.hpp"
#include "linalg.hpp"

namespace facetrack {

namespace {

double smallest_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// PSD probe with the same jitter ladder as matrix_sqrt; the input is never
// modified.
void require_psd_with_jitter(const Mat& m, const char* context) {
  const Mat identity = Mat::Identity(m.rows(), m.cols());
  for (double jitter : {0.0, kJitterSmall, kJitterLarge}) {
    Eigen::LLT<Mat> llt(jitter == 0.0 ? m : Mat(m + jitter * identity));
    if (llt.info() == Eigen::Success) return;
  }
  const double min_eig = smallest_eigenvalue(m);
  std::ostringstream msg;
  msg << context << ": covariance not PSD (smallest eigenvalue " << min_eig << ")";
  throw NotPsdError(msg.str(), min_eig);
}

}  // namespace

std::pair<Vec, Vec> compute_weights(const UkfConfig& config) {
  if (config.state_dim < 1) {
    throw ConfigError("compute_weights: state_dim must be >= 1");
  }
  const double denom = static_cast<double>(config.state_dim) + config.lambda;
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "compute_weights: n + lambda must be > 0 (n = " << config.state_dim
        << ", lambda = " << config.lambda << ")";
    throw ConfigError(msg.str());
  }
  const Eigen::Index count = 2 * config.state_dim + 1;
  Vec mean_weights(count);
  mean_weights.setConstant(1.0 / (2.0 * denom));
  mean_weights(0) = config.lambda / denom;
  return {mean_weights, mean_weights};
}

Mat matrix_sqrt(const Mat& p) {
  require_symmetric(p, "matrix_sqrt");
  const Mat identity = Mat::Identity(p.rows(), p.cols());
  for (double jitter : {0.0, kJitterSmall, kJitterLarge}) {
    Eigen::LLT<Mat> llt(jitter == 0.0 ? p : Mat(p + jitter * identity));
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
  }
  const double min_eig = smallest_eigenvalue(p);
  std::ostringstream msg;
  msg << "matrix_sqrt: not PSD after jitter (smallest eigenvalue " << min_eig << ")";
  throw NotPsdError(msg.str(), min_eig);
}

SigmaPointSet generate_sigma_points(const Vec& mean, const Mat& cov,
                                    const UkfConfig& config) {
  if (mean.size() != config.state_dim || cov.rows() != config.state_dim ||
      cov.cols() != config.state_dim) {
    std::ostringstream msg;
    msg << "generate_sigma_points: mean " << mean.size() << ", cov " << cov.rows() << "x"
        << cov.cols() << ", configured n = " << config.state_dim;
    throw DimensionError(msg.str());
  }
  auto [mean_weights, cov_weights] = compute_weights(config);
  const double scale = static_cast<double>(config.state_dim) + config.lambda;
  const Mat root = matrix_sqrt(scale * cov);

  const Eigen::Index n = config.state_dim;
  SigmaPointSet set;
  set.points.resize(n, 2 * n + 1);
  set.points.col(0) = mean;
  for (Eigen::Index i = 0; i < n; ++i) {
    set.points.col(1 + i) = mean + root.col(i);
    set.points.col(1 + n + i) = mean - root.col(i);
  }
  set.mean_weights = std::move(mean_weights);
  set.cov_weights = std::move(cov_weights);
  return set;
}

UnscentedTransformResult unscented_transform(const SigmaPointSet& points,
                                             const std::function<Vec(const Vec&)>& f,
                                             const Mat& additive_cov) {
  const Eigen::Index count = points.points.cols();
  if (count < 1 || points.mean_weights.size() != count ||
      points.cov_weights.size() != count) {
    throw DimensionError("unscented_transform: malformed sigma point set");
  }
  if (!points.points.allFinite()) {
    throw InvalidStateError("unscented_transform: non-finite sigma points");
  }

  Mat transformed;
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vec mapped = f(points.points.col(i));
    if (!mapped.allFinite()) {
      throw NumericError("unscented_transform: non-finite function output");
    }
    if (i == 0) {
      transformed.resize(mapped.size(), count);
    } else if (mapped.size() != transformed.rows()) {
      throw DimensionError("unscented_transform: inconsistent function output size");
    }
    transformed.col(i) = mapped;
  }
  if (additive_cov.rows() != transformed.rows() || additive_cov.cols() != transformed.rows()) {
    std::ostringstream msg;
    msg << "unscented_transform: additive covariance " << additive_cov.rows() << "x"
        << additive_cov.cols() << " does not match output dimension " << transformed.rows();
    throw DimensionError(msg.str());
  }

  UnscentedTransformResult result;
  result.mean = transformed * points.mean_weights;
  const Mat centered = transformed.colwise() - result.mean;
  result.cov = symmetrize(centered * points.cov_weights.asDiagonal() * centered.transpose() +
                          additive_cov);
  result.transformed_points = std::move(transformed);
  return result;
}

GaussianEstimate ukf_predict(const GaussianEstimate& state, const ProcessModel& model,
                             const Mat& q, double dt, const UkfConfig& config) {
  if (q.rows() != state.mean.size() || q.cols() != state.mean.size()) {
    std::ostringstream msg;
    msg << "ukf_predict: Q is " << q.rows() << "x" << q.cols() << ", state dimension is "
        << state.mean.size();
    throw DimensionError(msg.str());
  }
  const SigmaPointSet set = generate_sigma_points(state.mean, state.cov, config);
  auto transformed = unscented_transform(
      set, [&](const Vec& x) { return model.transition(x, dt); }, q);
  return {std::move(transformed.mean), std::move(transformed.cov)};
}

std::pair<GaussianEstimate, UkfUpdateDiagnostics> ukf_update(const GaussianEstimate& state,
                                                             const Vec& z,
                                                             const MeasurementModel& model,
                                                             const Mat& r,
                                                             const UkfConfig& config) {
  if (z.size() != model.dimension) {
    std::ostringstream msg;
    msg << "ukf_update: measurement length " << z.size() << " does not match model dimension "
        << model.dimension;
    throw DimensionError(msg.str());
  }
  if (r.rows() != model.dimension || r.cols() != model.dimension) {
    std::ostringstream msg;
    msg << "ukf_update: R is " << r.rows() << "x" << r.cols() << ", model dimension is "
        << model.dimension;
    throw DimensionError(msg.str());
  }

  const SigmaPointSet set = generate_sigma_points(state.mean, state.cov, config);
  const auto measured = unscented_transform(set, model.observe, r);

  UkfUpdateDiagnostics diagnostics;
  diagnostics.predicted_measurement = measured.mean;
  diagnostics.innovation = z - measured.mean;
  diagnostics.innovation_cov = measured.cov;  // S = Σ W(c)(z_i - ẑ)(z_i - ẑ)ᵀ + R

  const Mat state_centered = set.points.colwise() - state.mean;
  const Mat meas_centered = measured.transformed_points.colwise() - measured.mean;
  diagnostics.cross_cov =
      state_centered * set.cov_weights.asDiagonal() * meas_centered.transpose();

  // K = P_xz S⁻¹, solved as S Kᵀ = P_xzᵀ.
  diagnostics.gain =
      detail::spd_solve(diagnostics.innovation_cov, diagnostics.cross_cov.transpose(),
                        "ukf_update")
          .transpose();

  Vec mean = state.mean + diagnostics.gain * diagnostics.innovation;
  Mat cov = symmetrize(state.cov - diagnostics.gain * diagnostics.innovation_cov *
                                       diagnostics.gain.transpose());
  if (!mean.allFinite() || !cov.allFinite()) {
    throw NumericError("ukf_update: non-finite update");
  }
  require_psd_with_jitter(cov, "ukf_update");
  GaussianEstimate updated{std::move(mean), std::move(cov)};
  return {std::move(updated), std::move(diagnostics)};
}

}  // namespace facetrack
