#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "facetrack/experiment_types.hpp"
#include "facetrack/statespace.hpp"
#include "facetrack/types.hpp"

namespace facetrack {

inline constexpr int kDefaultLandmarkCount = 54;

// One time step of N landmarks, coordinates in millimeters.
struct LandmarkFrame {
  std::vector<Eigen::Vector3d> landmarks;
  int frame_index = 0;
};

struct Trajectory {
  std::vector<LandmarkFrame> frames;
  std::string user_label;
  double dt = 0.01;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int points() const { return frames.empty() ? 0 : static_cast<int>(frames[0].landmarks.size()); }
};

// One landmark per non-empty line, exactly 3 whitespace-delimited finite reals.
LandmarkFrame parse_landmark_file(std::istream& in, int expected_points = kDefaultLandmarkCount);
LandmarkFrame parse_landmark_text(const std::string& text, int expected_points = kDefaultLandmarkCount);

// 12 significant digits, one "x y z" row per landmark, LF endings.
void serialize_landmark_frame(const LandmarkFrame& frame, std::ostream& out);

// Frames in the given path order, frame_index 0..len-1. Parse failures carry
// the offending path.
Trajectory load_trajectory(const std::vector<std::string>& paths, double dt,
                           const std::string& user_label,
                           int expected_points = kDefaultLandmarkCount);

// Landmark-major flatten: [x_1, y_1, z_1, ..., x_N, y_N, z_N].
Vec flatten_frame(const LandmarkFrame& frame);
LandmarkFrame unflatten_state(const Vec& state, int frame_index = 0);

// z_k = flatten(frame_k) + sample from N(0, R), one per frame. Identical seed,
// identical output.
std::vector<Vec> synthesize_measurements(const Trajectory& trajectory, const NoiseSpec& noise,
                                         std::uint64_t seed);

// Header `user,filter,frame,mse,mae`; rows sorted by (user, filter, frame);
// 12 significant digits; LF endings. Comment lines are emitted `# `-prefixed
// above the header.
void write_results_csv(const std::vector<FilterRunResult>& results, const std::string& path,
                       const std::vector<std::string>& comment_lines = {});

// JSON mirror of the CSV fields; config echoed when provided.
void write_results_json(const std::vector<FilterRunResult>& results, const std::string& path,
                        const ExperimentConfig* config = nullptr,
                        const std::vector<std::string>& inputs = {});

// Long-format dump of real and estimated coordinates:
// header `user,series,frame,landmark,coord,value` with series "real" plus one
// per filter label.
void write_estimates_csv(const Trajectory& truth, const std::vector<FilterRunResult>& results,
                         const std::string& path,
                         const std::vector<std::string>& comment_lines = {});

std::string format_double(double value);  // %.12g

}  // namespace facetrack
