#include "linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace facetrack::detail {

Mat spd_solve(const Mat& s, const Mat& b, const char* context) {
  Eigen::LDLT<Mat> ldlt(s);
  if (ldlt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << context << ": innovation covariance factorization failed";
    throw SingularUpdateError(msg.str());
  }
  const Vec d = ldlt.vectorD();
  double dmin = std::abs(d(0));
  double dmax = dmin;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double a = std::abs(d(i));
    dmin = std::min(dmin, a);
    dmax = std::max(dmax, a);
    if (d(i) <= 0.0) {
      std::ostringstream msg;
      msg << context << ": innovation covariance is singular (pivot " << d(i) << ")";
      throw SingularUpdateError(msg.str());
    }
  }
  const double cond_estimate = dmin > 0.0 ? dmax / dmin
                                          : std::numeric_limits<double>::infinity();
  if (!(cond_estimate < kConditionLimit)) {
    std::ostringstream msg;
    msg << context << ": innovation covariance condition estimate " << cond_estimate
        << " exceeds " << kConditionLimit;
    throw SingularUpdateError(msg.str());
  }
  return ldlt.solve(b);
}

}  // namespace facetrack::detail
