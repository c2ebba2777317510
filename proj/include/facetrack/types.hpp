#pragma once

#include <Eigen/Dense>

namespace facetrack {

using Vec = Eigen::VectorXd;  // state / measurement vectors
using Mat = Eigen::MatrixXd;  // covariance, Jacobian and gain matrices

// Tolerances shared across the library.
inline constexpr double kSymmetryTol = 1e-9;       // |M - Mᵀ| allowed on covariances
inline constexpr double kPsdEigenvalueTol = 1e-9;  // eigenvalues down to -1e-9 tolerated
inline constexpr double kConditionLimit = 1e12;    // solves above this are treated as singular
inline constexpr double kJitterSmall = 1e-9;       // first Cholesky retry
inline constexpr double kJitterLarge = 1e-6;       // second Cholesky retry
inline constexpr double kFdEpsilon = 1e-6;         // default finite-difference step

void require_finite(const Vec& v, const char* what);
void require_finite(const Mat& m, const char* what);
void require_square(const Mat& m, const char* what);
void require_symmetric(const Mat& m, const char* what, double tol = kSymmetryTol);

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace facetrack
