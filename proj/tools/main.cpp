// facetrack command-line tool. Links the shared library through its C API.

#include <fnmatch.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facetrack/facetrack.h"

namespace {

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

int exit_code_for(ftk_status status) {
  switch (status) {
    case FTK_OK: return 0;
    case FTK_ERR_SINGULAR:
    case FTK_ERR_NOT_PSD:
    case FTK_ERR_NUMERIC: return 3;
    default: return 2;
  }
}

int fail(ftk_status status) {
  std::cerr << "error: " << ftk_last_error() << "\n";
  return exit_code_for(status);
}

int fail_usage(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

struct InputOptions {
  std::vector<std::string> frames;
  std::string dir;
  std::string glob = "*.txt";

  void attach(CLI::App* cmd) {
    cmd->add_option("--frames", frames, "Ordered landmark files, one frame per file");
    cmd->add_option("--dir", dir, "Directory containing landmark files");
    cmd->add_option("--glob", glob, "Filename pattern used with --dir")
        ->capture_default_str();
  }

  // Explicit list, or directory listing sorted by filename.
  std::vector<std::string> resolve() const {
    if (!frames.empty() && !dir.empty()) {
      throw CLI::ValidationError("input", "--frames and --dir are mutually exclusive");
    }
    if (!frames.empty()) return frames;
    if (dir.empty()) {
      throw CLI::ValidationError("input", "either --frames or --dir is required");
    }
    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) {
      throw CLI::ValidationError("input", "cannot list directory '" + dir + "': " + ec.message());
    }
    std::vector<std::string> names;
    for (const auto& entry : it) {
      if (!entry.is_regular_file()) continue;
      const std::string name = entry.path().filename().string();
      if (fnmatch(glob.c_str(), name.c_str(), 0) == 0) names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    std::vector<std::string> paths;
    paths.reserve(names.size());
    for (const std::string& name : names) {
      paths.push_back((std::filesystem::path(dir) / name).string());
    }
    if (paths.empty()) {
      throw CLI::ValidationError("input", "no files in '" + dir + "' match '" + glob + "'");
    }
    return paths;
  }
};

struct RunOptions {
  InputOptions inputs;
  std::string out;
  std::string format = "csv";
  std::string estimates;
  std::string user;
  std::size_t points = 54;
  ftk_config config{};

  void attach(CLI::App* cmd, bool stochastic) {
    ftk_config_default(&config);
    inputs.attach(cmd);
    cmd->add_option("--out", out, "Output table path")->required();
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--estimates", estimates,
                    "Also dump per-frame real/estimated coordinates to this CSV");
    cmd->add_option("--user", user, "User label for the output rows (default: --dir name)");
    cmd->add_option("--points", points, "Landmarks per frame")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--dt", config.dt, "Seconds between frames")->capture_default_str();
    cmd->add_option("--lambda", config.lambda, "UKF sigma-point spread")
        ->capture_default_str();
    cmd->add_option("--q-det", config.q_det, "Deterministic-mode process noise floor (mm^2)")
        ->capture_default_str();
    cmd->add_option("--r-det", config.r_det,
                    "Deterministic-mode measurement noise floor (mm^2)")
        ->capture_default_str();
    cmd->add_option("--initial-cov-scale", config.initial_cov_scale, "P0 = scale * I (mm^2)")
        ->capture_default_str();
    if (stochastic) {
      cmd->add_option("--sigma-velocity", config.sigma_velocity,
                      "Random velocity scale (mm/s)")
          ->capture_default_str();
      cmd->add_option("--sigma-process", config.sigma_process, "Process noise scale (mm)")
          ->capture_default_str();
      cmd->add_option("--sigma-measurement", config.sigma_measurement,
                      "Measurement noise scale (mm)")
          ->capture_default_str();
      cmd->add_option("--realizations", config.realizations, "Monte Carlo realizations")
          ->capture_default_str();
      cmd->add_option("--seed", config.seed, "Master RNG seed")->capture_default_str();
    }
  }

  std::string resolved_user() const {
    if (!user.empty()) return user;
    if (!inputs.dir.empty()) {
      const std::string name =
          std::filesystem::path(inputs.dir).filename().string();
      if (!name.empty()) return name;
    }
    return "user0";
  }

  // Full resolved configuration; lands in the CSV comment block so a run is
  // reproducible from its own output.
  std::vector<std::string> comment_lines(const std::string& mode,
                                         const std::vector<std::string>& paths) const {
    std::vector<std::string> lines;
    lines.push_back("facetrack run-" + mode);
    std::string input_line = "input:";
    for (const std::string& p : paths) input_line += " " + p;
    lines.push_back(input_line);
    lines.push_back("user = " + resolved_user());
    lines.push_back("points = " + std::to_string(points));
    lines.push_back("mode = " + std::string(mode == "det" ? "deterministic" : "stochastic"));
    lines.push_back("dt = " + fmt(config.dt));
    lines.push_back("lambda = " + fmt(config.lambda));
    lines.push_back("q_det = " + fmt(config.q_det));
    lines.push_back("r_det = " + fmt(config.r_det));
    lines.push_back("sigma_velocity = " + fmt(config.sigma_velocity));
    lines.push_back("sigma_process = " + fmt(config.sigma_process));
    lines.push_back("sigma_measurement = " + fmt(config.sigma_measurement));
    lines.push_back("realizations = " + std::to_string(config.realizations));
    lines.push_back("seed = " + std::to_string(config.seed));
    lines.push_back("initial_cov_scale = " + fmt(config.initial_cov_scale));
    return lines;
  }
};

class ResultHolder {
 public:
  ~ResultHolder() { reset(); }
  void reset() {
    ftk_result_free(ekf);
    ftk_result_free(ukf);
    ekf = nullptr;
    ukf = nullptr;
  }
  ftk_result* ekf = nullptr;
  ftk_result* ukf = nullptr;
};

class TrajectoryHolder {
 public:
  ~TrajectoryHolder() { ftk_trajectory_free(value); }
  ftk_trajectory* value = nullptr;
};

int run_experiment_command(const RunOptions& options, bool stochastic) {
  std::vector<std::string> paths;
  try {
    paths = options.inputs.resolve();
  } catch (const CLI::ValidationError& e) {
    return fail_usage(e.what());
  }

  std::vector<const char*> path_ptrs;
  path_ptrs.reserve(paths.size());
  for (const std::string& p : paths) path_ptrs.push_back(p.c_str());

  TrajectoryHolder trajectory;
  ftk_status status =
      ftk_trajectory_load(path_ptrs.data(), path_ptrs.size(), options.points,
                          options.config.dt, options.resolved_user().c_str(), &trajectory.value);
  if (status != FTK_OK) return fail(status);

  ResultHolder results;
  status = stochastic
               ? ftk_run_stochastic(trajectory.value, &options.config, &results.ekf, &results.ukf)
               : ftk_run_deterministic(trajectory.value, &options.config, &results.ekf,
                                       &results.ukf);
  if (status != FTK_OK) return fail(status);

  const ftk_result* pair[2] = {results.ekf, results.ukf};
  const std::vector<std::string> comments =
      options.comment_lines(stochastic ? "stoch" : "det", paths);
  std::vector<const char*> comment_ptrs;
  comment_ptrs.reserve(comments.size());
  for (const std::string& c : comments) comment_ptrs.push_back(c.c_str());
  if (options.format == "csv") {
    status = ftk_write_results_csv(pair, 2, options.out.c_str(), comment_ptrs.data(),
                                   comment_ptrs.size());
  } else {
    status = ftk_write_results_json(pair, 2, options.out.c_str(), &options.config,
                                    stochastic ? "stochastic" : "deterministic",
                                    path_ptrs.data(), path_ptrs.size());
  }
  if (status != FTK_OK) return fail(status);

  if (!options.estimates.empty()) {
    status = ftk_write_estimates_csv(trajectory.value, pair, 2, options.estimates.c_str(),
                                     comment_ptrs.data(), comment_ptrs.size());
    if (status != FTK_OK) return fail(status);
  }

  ftk_comparison comparison{};
  status = ftk_compare(results.ekf, results.ukf, &comparison);
  if (status != FTK_OK) return fail(status);

  std::cout << "frames: " << ftk_result_frames(results.ekf) << "\n"
            << "EKF mean MSE: " << fmt(comparison.ekf_mean_mse) << " mm^2\n"
            << "UKF mean MSE: " << fmt(comparison.ukf_mean_mse) << " mm^2\n"
            << "UKF/EKF mean MSE ratio: " << fmt(comparison.mse_ratio) << "\n"
            << "per-frame wins: EKF " << comparison.ekf_wins << ", UKF " << comparison.ukf_wins
            << ", ties " << comparison.ties << "\n"
            << "wrote " << options.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EKF/UKF toolkit for 3D facial landmark tracking"};
  app.require_subcommand(1);

  RunOptions det_options;
  CLI::App* run_det = app.add_subcommand(
      "run-det", "Run both filters in the deterministic (noise-free) setting");
  det_options.attach(run_det, /*stochastic=*/false);

  RunOptions stoch_options;
  CLI::App* run_stoch = app.add_subcommand(
      "run-stoch", "Run both filters with synthesized noise, averaged over realizations");
  stoch_options.attach(run_stoch, /*stochastic=*/true);

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic landmark trajectory");
  std::string synth_dir;
  std::size_t synth_points = 54;
  std::size_t synth_frames = 12;
  std::uint64_t synth_seed = 0;
  double synth_dt = 0.01;
  double synth_amplitude = 0.25;
  double synth_frequency = 0.5;
  synth->add_option("--dir", synth_dir, "Output directory")->required();
  synth->add_option("--points", synth_points, "Landmarks per frame")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--frames", synth_frames, "Number of frames")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
  synth->add_option("--dt", synth_dt, "Seconds between frames")->capture_default_str();
  synth->add_option("--amplitude", synth_amplitude, "Drift amplitude (mm)")
      ->capture_default_str();
  synth->add_option("--frequency", synth_frequency, "Drift frequency (Hz)")
      ->capture_default_str();

  CLI::App* validate =
      app.add_subcommand("validate", "Check landmark files without running filters");
  InputOptions validate_inputs;
  std::size_t validate_points = 54;
  validate_inputs.attach(validate);
  validate->add_option("--points", validate_points, "Expected landmarks per frame")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* report =
      app.add_subcommand("report", "Emit tidy long-format series from a results CSV");
  std::string report_results;
  std::string report_estimates;
  int report_landmark = -1;
  std::string report_coord;
  std::string report_out;
  report->add_option("results", report_results, "Results CSV from a prior run")->required();
  report->add_option("--estimates", report_estimates, "Estimates CSV from a prior run");
  report->add_option("--landmark", report_landmark, "0-based landmark index to trace");
  report->add_option("--coord", report_coord, "Coordinate to trace")
      ->check(CLI::IsMember({"x", "y", "z"}));
  report->add_option("--out", report_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (run_det->parsed()) return run_experiment_command(det_options, false);
  if (run_stoch->parsed()) return run_experiment_command(stoch_options, true);

  if (synth->parsed()) {
    const ftk_status status =
        ftk_synth_generate(synth_dir.c_str(), synth_points, synth_frames, synth_seed, synth_dt,
                           synth_amplitude, synth_frequency);
    if (status != FTK_OK) return fail(status);
    std::cout << "wrote " << synth_frames << " frames of " << synth_points << " points to "
              << synth_dir << "\n";
    return 0;
  }

  if (validate->parsed()) {
    std::vector<std::string> paths;
    try {
      paths = validate_inputs.resolve();
    } catch (const CLI::ValidationError& e) {
      return fail_usage(e.what());
    }
    bool all_valid = true;
    for (const std::string& path : paths) {
      const ftk_status status = ftk_validate_file(path.c_str(), validate_points);
      if (status == FTK_OK) {
        std::cout << path << ": OK\n";
      } else {
        all_valid = false;
        std::cout << path << ": " << ftk_last_error() << "\n";
      }
    }
    return all_valid ? 0 : 2;
  }

  if (report->parsed()) {
    if (report_landmark >= 0 && report_coord.empty()) {
      return fail_usage("--landmark requires --coord");
    }
    const ftk_status status = ftk_report_generate(
        report_results.c_str(), report_estimates.empty() ? nullptr : report_estimates.c_str(),
        report_landmark, report_coord.empty() ? nullptr : report_coord.c_str(),
        report_out.c_str());
    if (status != FTK_OK) return fail(status);
    std::cout << "wrote " << report_out << "\n";
    return 0;
  }

  return fail_usage("no subcommand given");
}
