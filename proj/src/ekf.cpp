#include "facetrack/ekf.hpp"

#include <sstream>

#include "facetrack/errors.hpp"
#include "linalg.hpp"

namespace facetrack {

namespace {

void check_state(const EkfState& state, const char* context) {
  if (state.mean.size() != state.cov.rows() || state.cov.rows() != state.cov.cols()) {
    std::ostringstream msg;
    msg << context << ": mean length " << state.mean.size()
        << " does not match covariance " << state.cov.rows() << "x" << state.cov.cols();
    throw DimensionError(msg.str());
  }
}

}  // namespace

EkfState ekf_predict(const EkfState& state, const ProcessModel& model, const Mat& q,
                     double dt) {
  check_state(state, "ekf_predict");
  if (q.rows() != state.mean.size() || q.cols() != state.mean.size()) {
    std::ostringstream msg;
    msg << "ekf_predict: Q is " << q.rows() << "x" << q.cols() << ", state dimension is "
        << state.mean.size();
    throw DimensionError(msg.str());
  }

  Vec mean = model.transition(state.mean, dt);
  if (mean.size() != state.mean.size()) {
    throw DimensionError("ekf_predict: transition changed the state dimension");
  }
  const Mat f = model.jacobian(state.mean, dt);
  if (f.rows() != state.mean.size() || f.cols() != state.mean.size()) {
    throw DimensionError("ekf_predict: Jacobian dimension does not match the state");
  }

  // P' = F P Fᵀ + Q, symmetrized against floating-point drift.
  Mat cov = symmetrize(f * state.cov * f.transpose() + q);
  if (!mean.allFinite() || !cov.allFinite()) {
    throw NumericError("ekf_predict: non-finite prediction");
  }
  return {std::move(mean), std::move(cov), state.step_index};
}

std::pair<EkfState, EkfUpdateDiagnostics> ekf_update(const EkfState& state, const Vec& z,
                                                     const MeasurementModel& model,
                                                     const Mat& r) {
  check_state(state, "ekf_update");
  if (z.size() != model.dimension) {
    std::ostringstream msg;
    msg << "ekf_update: measurement length " << z.size() << " does not match model dimension "
        << model.dimension;
    throw DimensionError(msg.str());
  }
  if (r.rows() != model.dimension || r.cols() != model.dimension) {
    std::ostringstream msg;
    msg << "ekf_update: R is " << r.rows() << "x" << r.cols() << ", model dimension is "
        << model.dimension;
    throw DimensionError(msg.str());
  }

  const Vec predicted = model.observe(state.mean);
  if (predicted.size() != model.dimension) {
    throw DimensionError("ekf_update: h(x) size does not match model dimension");
  }
  const Mat h = model.jacobian(state.mean);
  if (h.rows() != model.dimension || h.cols() != state.mean.size()) {
    throw DimensionError("ekf_update: Jacobian dimension mismatch");
  }

  const Mat pht = state.cov * h.transpose();
  const Mat s = symmetrize(h * pht + r);
  // K = P Hᵀ S⁻¹, solved as S Kᵀ = (P Hᵀ)ᵀ.
  const Mat gain = detail::spd_solve(s, pht.transpose(), "ekf_update").transpose();

  EkfUpdateDiagnostics diagnostics;
  diagnostics.gain = gain;
  diagnostics.innovation = z - predicted;
  diagnostics.predicted_measurement = predicted;

  Vec mean = state.mean + gain * diagnostics.innovation;
  const Mat identity = Mat::Identity(state.mean.size(), state.mean.size());
  Mat cov = symmetrize((identity - gain * h) * state.cov);
  if (!mean.allFinite() || !cov.allFinite()) {
    throw NumericError("ekf_update: non-finite update");
  }
  EkfState updated{std::move(mean), std::move(cov), state.step_index + 1};
  return {std::move(updated), std::move(diagnostics)};
}

}  // namespace facetrack
