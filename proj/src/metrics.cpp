#include "facetrack/metrics.hpp"

#include <cmath>
#include <sstream>

#include "facetrack/errors.hpp"

namespace facetrack {

double mse_at_step(const Vec& estimate, const Vec& truth) {
  if (estimate.size() != truth.size()) {
    std::ostringstream msg;
    msg << "mse_at_step: length mismatch (" << estimate.size() << " vs " << truth.size()
        << ")";
    throw DimensionError(msg.str());
  }
  if (estimate.size() == 0) throw DimensionError("mse_at_step: empty vectors");
  // Plain sequential sum: the 1e-12 agreement contract with a component-loop
  // oracle is tighter than reordering slack at mm^2 magnitudes.
  double sum = 0.0;
  for (Eigen::Index i = 0; i < estimate.size(); ++i) {
    const double diff = estimate(i) - truth(i);
    sum += diff * diff;
  }
  return sum / static_cast<double>(estimate.size());
}

double mae_at_step(const Vec& estimate, const Vec& truth) {
  if (estimate.size() != truth.size()) {
    std::ostringstream msg;
    msg << "mae_at_step: length mismatch (" << estimate.size() << " vs " << truth.size()
        << ")";
    throw DimensionError(msg.str());
  }
  if (estimate.size() == 0) throw DimensionError("mae_at_step: empty vectors");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < estimate.size(); ++i) {
    sum += std::abs(estimate(i) - truth(i));
  }
  return sum / static_cast<double>(estimate.size());
}

MseSeries average_series(const std::vector<MseSeries>& series) {
  if (series.empty()) {
    throw InvalidArgumentError("average_series: no series to aggregate");
  }
  const std::size_t length = series[0].values.size();
  for (const MseSeries& s : series) {
    if (s.values.size() != length) {
      std::ostringstream msg;
      msg << "average_series: ragged lengths (" << s.values.size() << " vs " << length << ")";
      throw DimensionError(msg.str());
    }
    if (s.filter_label != series[0].filter_label || s.user_label != series[0].user_label) {
      throw InvalidArgumentError("average_series: mismatched series labels");
    }
  }
  MseSeries averaged;
  averaged.filter_label = series[0].filter_label;
  averaged.user_label = series[0].user_label;
  averaged.values.assign(length, 0.0);
  // Mean anchored at the first series: when every series is identical the
  // deltas vanish and the result reproduces the input exactly.
  const double count = static_cast<double>(series.size());
  for (std::size_t i = 0; i < length; ++i) {
    double delta_sum = 0.0;
    for (const MseSeries& s : series) delta_sum += s.values[i] - series[0].values[i];
    averaged.values[i] = series[0].values[i] + delta_sum / count;
  }
  return averaged;
}

}  // namespace facetrack
