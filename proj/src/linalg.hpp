#pragma once

#include "facetrack/errors.hpp"
#include "facetrack/types.hpp"

namespace facetrack::detail {

// X = S⁻¹ * B for symmetric positive-definite S via LDLT. The condition of S
// is estimated from the spread of the factorization's diagonal; estimates
// above kConditionLimit (or a non-positive pivot) throw SingularUpdateError.
Mat spd_solve(const Mat& s, const Mat& b, const char* context);

}  // namespace facetrack::detail
