#pragma once

#include <functional>
#include <string>

#include "facetrack/types.hpp"

namespace facetrack {

// Process and measurement noise description. When built from scalars, Q and R
// are exactly diagonal.
struct NoiseSpec {
  Mat process_cov;                 // Q
  Mat measurement_cov;             // R
  double velocity_sigma = 0.0;     // mm/s
  double measurement_sigma = 0.0;  // mm

  static NoiseSpec isotropic(Eigen::Index dim, double sigma_process,
                             double sigma_measurement, double sigma_velocity = 0.0);
};

// Nonlinear process model x_{k+1} = f(x_k, dt) with Jacobian F = df/dx.
struct ProcessModel {
  std::function<Vec(const Vec&, double)> transition;
  std::function<Mat(const Vec&, double)> jacobian;
  std::string name;
};

// Measurement model z = h(x) with Jacobian H = dh/dx.
struct MeasurementModel {
  std::function<Vec(const Vec&)> observe;
  std::function<Mat(const Vec&)> jacobian;
  Eigen::Index dimension = 0;
  std::string name;
};

// f(x) = x: the state carries over unchanged.
Vec constant_position_transition(const Vec& x, double dt);

// f(x) = x + v*dt + w.
Vec random_walk_transition(const Vec& x, const Vec& v, const Vec& w, double dt);

// h(x) = x.
Vec identity_measurement(const Vec& x);

// Central differences: J[i][j] = (f(x + eps*e_j)[i] - f(x - eps*e_j)[i]) / (2*eps).
// Fallback for models without an analytic Jacobian; exact for affine maps up
// to roundoff.
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                               double eps = kFdEpsilon);

ProcessModel constant_position_model();
ProcessModel random_velocity_model(Vec velocity);  // x + v*dt, identity Jacobian
ProcessModel linear_transition_model(Mat a);       // f(x) = A*x
MeasurementModel identity_measurement_model(Eigen::Index dim);
MeasurementModel linear_measurement_model(Mat h);

}  // namespace facetrack
