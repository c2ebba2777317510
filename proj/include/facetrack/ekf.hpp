#pragma once

#include <utility>

#include "facetrack/statespace.hpp"

namespace facetrack {

struct EkfState {
  Vec mean;            // x̂_{k|k}
  Mat cov;             // P_{k|k}
  int step_index = 0;  // advances on update
};

struct EkfUpdateDiagnostics {
  Mat gain;                   // K_k
  Vec innovation;             // z_k - h(x_{k|k-1})
  Vec predicted_measurement;  // h(x_{k|k-1})
};

// Prediction: mean' = f(mean, dt), cov' = F*cov*Fᵀ + Q, symmetrized.
EkfState ekf_predict(const EkfState& state, const ProcessModel& model, const Mat& q,
                     double dt);

// Update: K = P*Hᵀ*(H*P*Hᵀ + R)⁻¹, x' = x + K*(z - h(x)), P' = (I - K*H)*P.
// The gain is obtained from a linear solve, not an explicit inverse.
std::pair<EkfState, EkfUpdateDiagnostics> ekf_update(const EkfState& state, const Vec& z,
                                                     const MeasurementModel& model,
                                                     const Mat& r);

}  // namespace facetrack
