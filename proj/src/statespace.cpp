#include "facetrack/statespace.hpp"

#include <memory>
#include <sstream>
#include <utility>

#include "facetrack/errors.hpp"

namespace facetrack {

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << what << ": non-finite entries";
    throw InvalidStateError(msg.str());
  }
}

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    std::ostringstream msg;
    msg << what << ": non-finite entries";
    throw InvalidStateError(msg.str());
  }
}

void require_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
}

void require_symmetric(const Mat& m, const char* what, double tol) {
  require_square(m, what);
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= tol)) {
    std::ostringstream msg;
    msg << what << ": matrix asymmetry " << asym << " exceeds " << tol;
    throw InvalidArgumentError(msg.str());
  }
}

NoiseSpec NoiseSpec::isotropic(Eigen::Index dim, double sigma_process,
                               double sigma_measurement, double sigma_velocity) {
  if (dim < 1) throw InvalidArgumentError("NoiseSpec::isotropic: dim must be >= 1");
  if (sigma_process < 0 || sigma_measurement < 0 || sigma_velocity < 0) {
    throw InvalidArgumentError("NoiseSpec::isotropic: sigmas must be nonnegative");
  }
  NoiseSpec spec;
  spec.process_cov = sigma_process * sigma_process * Mat::Identity(dim, dim);
  spec.measurement_cov = sigma_measurement * sigma_measurement * Mat::Identity(dim, dim);
  spec.velocity_sigma = sigma_velocity;
  spec.measurement_sigma = sigma_measurement;
  return spec;
}

Vec constant_position_transition(const Vec& x, double /*dt*/) {
  require_finite(x, "constant_position_transition");
  return x;
}

Vec random_walk_transition(const Vec& x, const Vec& v, const Vec& w, double dt) {
  if (v.size() != x.size() || w.size() != x.size()) {
    std::ostringstream msg;
    msg << "random_walk_transition: length mismatch (x " << x.size() << ", v " << v.size()
        << ", w " << w.size() << ")";
    throw DimensionError(msg.str());
  }
  if (!(dt > 0.0)) throw InvalidArgumentError("random_walk_transition: dt must be positive");
  require_finite(x, "random_walk_transition x");
  require_finite(v, "random_walk_transition v");
  require_finite(w, "random_walk_transition w");
  return x + v * dt + w;
}

Vec identity_measurement(const Vec& x) {
  require_finite(x, "identity_measurement");
  return x;
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                               double eps) {
  if (!(eps > 0.0)) throw InvalidArgumentError("finite_difference_jacobian: eps must be > 0");
  require_finite(x, "finite_difference_jacobian");
  const Eigen::Index n = x.size();
  Vec probe = x;
  Mat jac;
  for (Eigen::Index j = 0; j < n; ++j) {
    probe(j) = x(j) + eps;
    const Vec hi = f(probe);
    probe(j) = x(j) - eps;
    const Vec lo = f(probe);
    probe(j) = x(j);
    if (!hi.allFinite() || !lo.allFinite()) {
      throw NumericError("finite_difference_jacobian: non-finite function evaluation");
    }
    if (j == 0) {
      jac.resize(hi.size(), n);
    } else if (hi.size() != jac.rows() || lo.size() != jac.rows()) {
      throw DimensionError("finite_difference_jacobian: inconsistent output size");
    }
    jac.col(j) = (hi - lo) / (2.0 * eps);
  }
  return jac;
}

ProcessModel constant_position_model() {
  ProcessModel model;
  model.transition = [](const Vec& x, double dt) { return constant_position_transition(x, dt); };
  model.jacobian = [](const Vec& x, double) { return Mat::Identity(x.size(), x.size()).eval(); };
  model.name = "constant_position";
  return model;
}

ProcessModel random_velocity_model(Vec velocity) {
  ProcessModel model;
  auto v = std::make_shared<const Vec>(std::move(velocity));
  model.transition = [v](const Vec& x, double dt) {
    return random_walk_transition(x, *v, Vec::Zero(x.size()), dt);
  };
  model.jacobian = [](const Vec& x, double) { return Mat::Identity(x.size(), x.size()).eval(); };
  model.name = "random_velocity";
  return model;
}

ProcessModel linear_transition_model(Mat a) {
  require_square(a, "linear_transition_model");
  ProcessModel model;
  auto mat = std::make_shared<const Mat>(std::move(a));
  model.transition = [mat](const Vec& x, double) {
    if (x.size() != mat->cols()) {
      throw DimensionError("linear_transition_model: state size does not match A");
    }
    return (*mat * x).eval();
  };
  model.jacobian = [mat](const Vec&, double) { return *mat; };
  model.name = "linear_transition";
  return model;
}

MeasurementModel identity_measurement_model(Eigen::Index dim) {
  if (dim < 1) throw InvalidArgumentError("identity_measurement_model: dim must be >= 1");
  MeasurementModel model;
  model.observe = [](const Vec& x) { return identity_measurement(x); };
  model.jacobian = [](const Vec& x) { return Mat::Identity(x.size(), x.size()).eval(); };
  model.dimension = dim;
  model.name = "identity";
  return model;
}

MeasurementModel linear_measurement_model(Mat h) {
  MeasurementModel model;
  model.dimension = h.rows();
  auto mat = std::make_shared<const Mat>(std::move(h));
  model.observe = [mat](const Vec& x) {
    if (x.size() != mat->cols()) {
      throw DimensionError("linear_measurement_model: state size does not match H");
    }
    return (*mat * x).eval();
  };
  model.jacobian = [mat](const Vec&) { return *mat; };
  model.name = "linear_measurement";
  return model;
}

}  // namespace facetrack
