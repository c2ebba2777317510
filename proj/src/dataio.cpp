#include "facetrack/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "facetrack/errors.hpp"
#include "facetrack/rng.hpp"
#include "facetrack/ukf.hpp"

namespace facetrack {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_real(const std::string& token, int line_number) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + token.size()) {
    std::ostringstream msg;
    msg << "line " << line_number << ": invalid number '" << token << "'";
    throw ParseError(msg.str());
  }
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "line " << line_number << ": non-finite value '" << token << "'";
    throw ParseError(msg.str());
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

LandmarkFrame parse_landmark_file(std::istream& in, int expected_points) {
  if (expected_points < 1) {
    throw InvalidArgumentError("parse_landmark_file: expected_points must be >= 1");
  }
  LandmarkFrame frame;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;  // blank lines are skipped
    if (fields.size() != 3) {
      std::ostringstream msg;
      msg << "line " << line_number << ": expected 3 fields, found " << fields.size();
      throw ParseError(msg.str());
    }
    frame.landmarks.emplace_back(parse_real(fields[0], line_number),
                                 parse_real(fields[1], line_number),
                                 parse_real(fields[2], line_number));
  }
  if (static_cast<int>(frame.landmarks.size()) != expected_points) {
    std::ostringstream msg;
    msg << "expected " << expected_points << " rows, found " << frame.landmarks.size();
    throw ParseError(msg.str());
  }
  return frame;
}

LandmarkFrame parse_landmark_text(const std::string& text, int expected_points) {
  std::istringstream in(text);
  return parse_landmark_file(in, expected_points);
}

void serialize_landmark_frame(const LandmarkFrame& frame, std::ostream& out) {
  for (const Eigen::Vector3d& p : frame.landmarks) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
        << format_double(p.z()) << '\n';
  }
}

Trajectory load_trajectory(const std::vector<std::string>& paths, double dt,
                           const std::string& user_label, int expected_points) {
  if (paths.empty()) {
    throw InvalidArgumentError("load_trajectory: at least one path is required");
  }
  if (!(dt > 0.0)) throw InvalidArgumentError("load_trajectory: dt must be positive");
  Trajectory trajectory;
  trajectory.user_label = user_label;
  trajectory.dt = dt;
  trajectory.frames.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::ifstream in(paths[i]);
    if (!in) {
      throw IoError("load_trajectory: cannot open '" + paths[i] + "'");
    }
    try {
      LandmarkFrame frame = parse_landmark_file(in, expected_points);
      frame.frame_index = static_cast<int>(i);
      trajectory.frames.push_back(std::move(frame));
    } catch (const ParseError& e) {
      throw ParseError(paths[i] + ": " + e.what());
    }
  }
  return trajectory;
}

Vec flatten_frame(const LandmarkFrame& frame) {
  Vec state(3 * static_cast<Eigen::Index>(frame.landmarks.size()));
  for (std::size_t i = 0; i < frame.landmarks.size(); ++i) {
    state(3 * i + 0) = frame.landmarks[i].x();
    state(3 * i + 1) = frame.landmarks[i].y();
    state(3 * i + 2) = frame.landmarks[i].z();
  }
  return state;
}

LandmarkFrame unflatten_state(const Vec& state, int frame_index) {
  if (state.size() % 3 != 0 || state.size() == 0) {
    std::ostringstream msg;
    msg << "unflatten_state: length " << state.size() << " is not a positive multiple of 3";
    throw DimensionError(msg.str());
  }
  LandmarkFrame frame;
  frame.frame_index = frame_index;
  frame.landmarks.reserve(state.size() / 3);
  for (Eigen::Index i = 0; i < state.size(); i += 3) {
    frame.landmarks.emplace_back(state(i), state(i + 1), state(i + 2));
  }
  return frame;
}

std::vector<Vec> synthesize_measurements(const Trajectory& trajectory, const NoiseSpec& noise,
                                         std::uint64_t seed) {
  const Eigen::Index dim = 3 * trajectory.points();
  const Mat& r = noise.measurement_cov;
  if (r.rows() != dim || r.cols() != dim) {
    std::ostringstream msg;
    msg << "synthesize_measurements: R is " << r.rows() << "x" << r.cols()
        << ", state dimension is " << dim;
    throw DimensionError(msg.str());
  }

  const bool diagonal = r.isDiagonal(0.0);
  Vec diag_scale;
  Mat root;
  if (diagonal) {
    diag_scale = r.diagonal().cwiseMax(0.0).cwiseSqrt();
    if ((r.diagonal().array() < 0.0).any()) {
      throw NotPsdError("synthesize_measurements: R has negative diagonal entries",
                        r.diagonal().minCoeff());
    }
  } else {
    root = matrix_sqrt(r);  // throws NotPsdError when R is not PSD
  }

  SplitMix64 rng(seed);
  std::vector<Vec> measurements;
  measurements.reserve(trajectory.frames.size());
  for (const LandmarkFrame& frame : trajectory.frames) {
    Vec draw(dim);
    for (Eigen::Index i = 0; i < dim; ++i) draw(i) = rng.next_gaussian();
    const Vec sample = diagonal ? Vec(diag_scale.cwiseProduct(draw)) : Vec(root * draw);
    measurements.push_back(flatten_frame(frame) + sample);
  }
  return measurements;
}

namespace {

struct ResultRow {
  const std::string* user;
  const std::string* filter;
  std::size_t frame;
  double mse;
  double mae;
};

std::vector<ResultRow> collect_rows(const std::vector<FilterRunResult>& results) {
  std::vector<ResultRow> rows;
  for (const FilterRunResult& result : results) {
    if (result.mse.values.size() != result.mae.values.size()) {
      throw DimensionError("write_results_csv: mse/mae length mismatch");
    }
    for (std::size_t frame = 0; frame < result.mse.values.size(); ++frame) {
      rows.push_back({&result.user_label, &result.filter_label, frame,
                      result.mse.values[frame], result.mae.values[frame]});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (*a.user != *b.user) return *a.user < *b.user;
    if (*a.filter != *b.filter) return *a.filter < *b.filter;
    return a.frame < b.frame;
  });
  return rows;
}

}  // namespace

void write_results_csv(const std::vector<FilterRunResult>& results, const std::string& path,
                       const std::vector<std::string>& comment_lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_results_csv: cannot open '" + path + "' for writing");
  for (const std::string& line : comment_lines) out << "# " << line << '\n';
  out << "user,filter,frame,mse,mae\n";
  for (const ResultRow& row : collect_rows(results)) {
    out << *row.user << ',' << *row.filter << ',' << row.frame << ','
        << format_double(row.mse) << ',' << format_double(row.mae) << '\n';
  }
  if (!out) throw IoError("write_results_csv: write to '" + path + "' failed");
}

void write_results_json(const std::vector<FilterRunResult>& results, const std::string& path,
                        const ExperimentConfig* config, const std::vector<std::string>& inputs) {
  nlohmann::json doc;
  if (config != nullptr) {
    doc["config"] = {
        {"mode", config->mode == ExperimentMode::deterministic ? "deterministic" : "stochastic"},
        {"dt", config->dt},
        {"lambda", config->lambda},
        {"q_det", config->q_det},
        {"r_det", config->r_det},
        {"sigma_velocity", config->sigma_velocity},
        {"sigma_process", config->sigma_process},
        {"sigma_measurement", config->sigma_measurement},
        {"realizations", config->realizations},
        {"seed", config->seed},
        {"initial_cov_scale", config->initial_cov_scale},
    };
  }
  if (!inputs.empty()) doc["inputs"] = inputs;

  // Same ordering as the CSV rows.
  std::vector<const FilterRunResult*> ordered;
  for (const FilterRunResult& r : results) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FilterRunResult* a, const FilterRunResult* b) {
                     if (a->user_label != b->user_label) return a->user_label < b->user_label;
                     return a->filter_label < b->filter_label;
                   });
  doc["results"] = nlohmann::json::array();
  for (const FilterRunResult* result : ordered) {
    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t frame = 0; frame < result->mse.values.size(); ++frame) {
      frames.push_back({{"frame", frame},
                        {"mse", result->mse.values[frame]},
                        {"mae", result->mae.values[frame]}});
    }
    doc["results"].push_back({{"user", result->user_label},
                              {"filter", result->filter_label},
                              {"frames", std::move(frames)}});
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_results_json: cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write_results_json: write to '" + path + "' failed");
}

void write_estimates_csv(const Trajectory& truth, const std::vector<FilterRunResult>& results,
                         const std::string& path,
                         const std::vector<std::string>& comment_lines) {
  const char* coords[3] = {"x", "y", "z"};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_estimates_csv: cannot open '" + path + "' for writing");
  for (const std::string& line : comment_lines) out << "# " << line << '\n';
  out << "user,series,frame,landmark,coord,value\n";

  auto emit_series = [&](const std::string& user, const std::string& series,
                         const std::vector<LandmarkFrame>& frames) {
    for (std::size_t frame = 0; frame < frames.size(); ++frame) {
      for (std::size_t lm = 0; lm < frames[frame].landmarks.size(); ++lm) {
        for (int c = 0; c < 3; ++c) {
          out << user << ',' << series << ',' << frame << ',' << lm << ',' << coords[c]
              << ',' << format_double(frames[frame].landmarks[lm](c)) << '\n';
        }
      }
    }
  };

  // "real" first, then filters in label order.
  emit_series(truth.user_label, "real", truth.frames);
  std::vector<const FilterRunResult*> ordered;
  for (const FilterRunResult& r : results) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FilterRunResult* a, const FilterRunResult* b) {
                     if (a->user_label != b->user_label) return a->user_label < b->user_label;
                     return a->filter_label < b->filter_label;
                   });
  for (const FilterRunResult* result : ordered) {
    std::vector<LandmarkFrame> frames;
    frames.reserve(result->estimates.size());
    for (std::size_t i = 0; i < result->estimates.size(); ++i) {
      frames.push_back(unflatten_state(result->estimates[i], static_cast<int>(i)));
    }
    emit_series(result->user_label, result->filter_label, frames);
  }
  if (!out) throw IoError("write_estimates_csv: write to '" + path + "' failed");
}

}  // namespace facetrack
