#pragma once

#include <string>
#include <vector>

#include "facetrack/types.hpp"

namespace facetrack {

// Per-time-step error series (mm²) for one filter on one trajectory.
struct MseSeries {
  std::vector<double> values;
  std::string filter_label;
  std::string user_label;
};

// Mean of componentwise squared differences.
double mse_at_step(const Vec& estimate, const Vec& truth);

// Mean of componentwise absolute differences.
double mae_at_step(const Vec& estimate, const Vec& truth);

// Pointwise arithmetic mean; all series must share length and labels.
MseSeries average_series(const std::vector<MseSeries>& series);

}  // namespace facetrack
