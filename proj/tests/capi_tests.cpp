// Exercises the shared library strictly through the C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "facetrack/facetrack.h"

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("facetrack_capi_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  static int& counter() {
    static int value = 0;
    return value;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void doubling_transition(const double* x, size_t n, double /*dt*/, double* out, void* /*user*/) {
  for (size_t i = 0; i < n; ++i) out[i] = 2.0 * x[i];
}

void first_component_measurement(const double* x, size_t /*n*/, double* out, size_t /*m*/,
                                 void* /*user*/) {
  out[0] = x[0];
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ftk_version()) == "1.0.0");
  CHECK(std::string(ftk_status_name(FTK_OK)) == "ok");
  CHECK(std::string(ftk_status_name(FTK_ERR_SINGULAR)) == "singular_update");
}

TEST_CASE("EKF handle: scalar Kalman algebra") {
  const double x0 = 0.0;
  const double p0 = 2.0;
  ftk_filter* filter = nullptr;
  REQUIRE(ftk_ekf_create(1, &x0, &p0, &filter) == FTK_OK);
  REQUIRE(filter != nullptr);
  CHECK(ftk_filter_dim(filter) == 1);

  const double z = 3.0;
  const double r = 1.0;
  REQUIRE(ftk_filter_update(filter, &z, 1, nullptr, nullptr, &r) == FTK_OK);

  double mean = 0.0;
  double cov = 0.0;
  REQUIRE(ftk_filter_mean(filter, &mean) == FTK_OK);
  REQUIRE(ftk_filter_cov(filter, &cov) == FTK_OK);
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cov == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  ftk_filter_free(filter);
}

TEST_CASE("EKF handle: callback transition uses finite-difference Jacobians") {
  const double x0 = 1.0;
  const double p0 = 1.0;
  ftk_filter* filter = nullptr;
  REQUIRE(ftk_ekf_create(1, &x0, &p0, &filter) == FTK_OK);

  // f(x) = 2x with P = 1, Q = 0.5: P' = 4.5
  const double q = 0.5;
  REQUIRE(ftk_filter_predict(filter, doubling_transition, nullptr, 0.01, &q) == FTK_OK);
  double mean = 0.0;
  double cov = 0.0;
  REQUIRE(ftk_filter_mean(filter, &mean) == FTK_OK);
  REQUIRE(ftk_filter_cov(filter, &cov) == FTK_OK);
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cov == doctest::Approx(4.5).epsilon(1e-6));
  ftk_filter_free(filter);
}

TEST_CASE("UKF handle matches the EKF on a linear problem") {
  const double x0[2] = {0.0, 0.0};
  ftk_filter* filter = nullptr;
  REQUIRE(ftk_ukf_create(2, x0, nullptr, 1.0, &filter) == FTK_OK);

  const double q[4] = {0.1, 0.0, 0.0, 0.1};
  REQUIRE(ftk_filter_predict(filter, nullptr, nullptr, 0.01, q) == FTK_OK);

  const double z[2] = {2.0, 2.0};
  const double r[4] = {1.1, 0.0, 0.0, 1.1};  // matches the predicted covariance
  REQUIRE(ftk_filter_update(filter, z, 2, nullptr, nullptr, r) == FTK_OK);

  double mean[2] = {0.0, 0.0};
  REQUIRE(ftk_filter_mean(filter, mean) == FTK_OK);
  CHECK(mean[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mean[1] == doctest::Approx(1.0).epsilon(1e-8));
  ftk_filter_free(filter);
}

TEST_CASE("partial measurement via callback") {
  const double x0[2] = {1.0, 5.0};
  ftk_filter* filter = nullptr;
  REQUIRE(ftk_ekf_create(2, x0, nullptr, &filter) == FTK_OK);
  const double z = 3.0;
  const double r = 1.0;
  REQUIRE(ftk_filter_update(filter, &z, 1, first_component_measurement, nullptr, &r) ==
          FTK_OK);
  double mean[2] = {0.0, 0.0};
  REQUIRE(ftk_filter_mean(filter, mean) == FTK_OK);
  CHECK(mean[0] == doctest::Approx(2.0).epsilon(1e-6));  // K = 1/2 on the observed part
  CHECK(mean[1] == doctest::Approx(5.0).epsilon(1e-6));  // untouched
  ftk_filter_free(filter);
}

TEST_CASE("error codes and messages") {
  SUBCASE("identity measurement dimension mismatch") {
    const double x0[2] = {0.0, 0.0};
    ftk_filter* filter = nullptr;
    REQUIRE(ftk_ekf_create(2, x0, nullptr, &filter) == FTK_OK);
    const double z = 1.0;
    const double r = 1.0;
    CHECK(ftk_filter_update(filter, &z, 1, nullptr, nullptr, &r) == FTK_ERR_DIMENSION);
    CHECK(std::strlen(ftk_last_error()) > 0);
    ftk_filter_free(filter);
  }
  SUBCASE("singular update") {
    const double x0 = 0.0;
    const double p0 = 1.0;
    ftk_filter* filter = nullptr;
    REQUIRE(ftk_ekf_create(1, &x0, &p0, &filter) == FTK_OK);
    const double z = 1.0;
    const double r = -1.0;  // S = P + R = 0
    CHECK(ftk_filter_update(filter, &z, 1, nullptr, nullptr, &r) == FTK_ERR_SINGULAR);
    ftk_filter_free(filter);
  }
  SUBCASE("invalid UKF lambda") {
    const double x0 = 0.0;
    ftk_filter* filter = nullptr;
    CHECK(ftk_ukf_create(1, &x0, nullptr, -1.0, &filter) == FTK_ERR_CONFIG);
    CHECK(filter == nullptr);
  }
  SUBCASE("non-finite initial state") {
    const double x0 = std::nan("");
    ftk_filter* filter = nullptr;
    CHECK(ftk_ekf_create(1, &x0, nullptr, &filter) == FTK_ERR_INVALID_STATE);
  }
}

TEST_CASE("trajectory round trip and experiments") {
  // 2 landmarks, 3 frames; constant positions.
  const size_t points = 2;
  const size_t frames = 3;
  std::vector<double> data;
  for (size_t k = 0; k < frames; ++k) {
    for (size_t i = 0; i < 3 * points; ++i) data.push_back(static_cast<double>(i));
  }
  ftk_trajectory* trajectory = nullptr;
  REQUIRE(ftk_trajectory_create(points, frames, data.data(), 0.01, "capi", &trajectory) ==
          FTK_OK);
  CHECK(ftk_trajectory_frames(trajectory) == frames);
  CHECK(ftk_trajectory_points(trajectory) == points);
  double frame[6] = {0};
  REQUIRE(ftk_trajectory_frame(trajectory, 1, frame) == FTK_OK);
  CHECK(frame[5] == 5.0);

  ftk_config config;
  ftk_config_default(&config);
  CHECK(config.dt == 0.01);
  CHECK(config.realizations == 100);

  ftk_result* ekf = nullptr;
  ftk_result* ukf = nullptr;
  REQUIRE(ftk_run_deterministic(trajectory, &config, &ekf, &ukf) == FTK_OK);
  REQUIRE(ekf != nullptr);
  REQUIRE(ukf != nullptr);
  CHECK(ftk_result_frames(ekf) == frames);
  CHECK(std::string(ftk_result_filter_label(ekf)) == "EKF");
  CHECK(std::string(ftk_result_user_label(ukf)) == "capi");

  double mse = 1.0;
  REQUIRE(ftk_result_mse(ekf, 2, &mse) == FTK_OK);
  CHECK(mse <= 1e-10);  // constant trajectory
  double mae = 1.0;
  REQUIRE(ftk_result_mae(ekf, 2, &mae) == FTK_OK);
  CHECK(mae <= 1e-5);
  double estimate[6] = {0};
  REQUIRE(ftk_result_estimate(ekf, 0, estimate) == FTK_OK);
  CHECK(estimate[3] == 3.0);

  ftk_comparison comparison;
  REQUIRE(ftk_compare(ekf, ukf, &comparison) == FTK_OK);
  CHECK(comparison.ekf_wins + comparison.ukf_wins + comparison.ties == frames);

  TempDir dir;
  const ftk_result* pair[2] = {ekf, ukf};
  const char* comments[1] = {"capi test"};
  REQUIRE(ftk_write_results_csv(pair, 2, dir.file("out.csv").c_str(), comments, 1) == FTK_OK);
  const std::string csv = read_file(dir.file("out.csv"));
  CHECK(csv.find("# capi test\n") == 0);
  CHECK(csv.find("user,filter,frame,mse,mae\n") != std::string::npos);
  CHECK(csv.find("capi,EKF,0,") != std::string::npos);

  REQUIRE(ftk_write_results_json(pair, 2, dir.file("out.json").c_str(), &config,
                                 "deterministic", nullptr, 0) == FTK_OK);
  CHECK(read_file(dir.file("out.json")).find("\"filter\": \"EKF\"") != std::string::npos);
  CHECK(read_file(dir.file("out.json")).find("\"mode\": \"deterministic\"") !=
        std::string::npos);
  CHECK(ftk_write_results_json(pair, 2, dir.file("bad.json").c_str(), &config, "sideways",
                               nullptr, 0) == FTK_ERR_INVALID_ARGUMENT);

  REQUIRE(ftk_write_estimates_csv(trajectory, pair, 2, dir.file("est.csv").c_str(),
                                  comments, 1) == FTK_OK);
  CHECK(read_file(dir.file("est.csv")).find("capi,real,0,0,x,0") != std::string::npos);

  ftk_result_free(ekf);
  ftk_result_free(ukf);

  // Stochastic run through the same handle.
  config.realizations = 2;
  config.seed = 9;
  REQUIRE(ftk_run_stochastic(trajectory, &config, &ekf, &ukf) == FTK_OK);
  CHECK(ftk_result_frames(ekf) == frames);
  ftk_result_free(ekf);
  ftk_result_free(ukf);
  ftk_trajectory_free(trajectory);
}

TEST_CASE("synth, validate and report through the C API") {
  TempDir dir;
  REQUIRE(ftk_synth_generate(dir.file("synthdata").c_str(), 3, 4, 1, 0.0, 0.0, 0.0) == FTK_OK);
  for (int k = 0; k < 4; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "synthdata/frame_%03d.txt", k);
    CHECK(ftk_validate_file(dir.file(name).c_str(), 3) == FTK_OK);
    CHECK(ftk_validate_file(dir.file(name).c_str(), 54) == FTK_ERR_PARSE);
  }
  CHECK(ftk_validate_file(dir.file("absent.txt").c_str(), 3) == FTK_ERR_IO);

  // Load the synthetic frames and produce a results CSV plus estimates.
  std::vector<std::string> paths;
  std::vector<const char*> path_ptrs;
  for (int k = 0; k < 4; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "synthdata/frame_%03d.txt", k);
    paths.push_back(dir.file(name));
  }
  for (const auto& p : paths) path_ptrs.push_back(p.c_str());
  ftk_trajectory* trajectory = nullptr;
  REQUIRE(ftk_trajectory_load(path_ptrs.data(), path_ptrs.size(), 3, 0.01, "synth",
                              &trajectory) == FTK_OK);
  ftk_config config;
  ftk_config_default(&config);
  ftk_result* ekf = nullptr;
  ftk_result* ukf = nullptr;
  REQUIRE(ftk_run_deterministic(trajectory, &config, &ekf, &ukf) == FTK_OK);
  const ftk_result* pair[2] = {ekf, ukf};
  REQUIRE(ftk_write_results_csv(pair, 2, dir.file("results.csv").c_str(), nullptr, 0) ==
          FTK_OK);
  REQUIRE(ftk_write_estimates_csv(trajectory, pair, 2, dir.file("estimates.csv").c_str(),
                                  nullptr, 0) == FTK_OK);

  SUBCASE("report with mse series only") {
    REQUIRE(ftk_report_generate(dir.file("results.csv").c_str(), nullptr, -1, nullptr,
                                dir.file("report.csv").c_str()) == FTK_OK);
    const std::string report = read_file(dir.file("report.csv"));
    CHECK(report.find("series,frame,value\n") == 0);
    CHECK(report.find("synth.EKF.mse,0,") != std::string::npos);
    CHECK(report.find("synth.UKF.mae,3,") != std::string::npos);
  }
  SUBCASE("report with a landmark trace") {
    REQUIRE(ftk_report_generate(dir.file("results.csv").c_str(),
                                dir.file("estimates.csv").c_str(), 2, "z",
                                dir.file("report.csv").c_str()) == FTK_OK);
    const std::string report = read_file(dir.file("report.csv"));
    CHECK(report.find("synth.real.p2.z,0,") != std::string::npos);
    CHECK(report.find("synth.EKF.p2.z,3,") != std::string::npos);
  }
  SUBCASE("out-of-range landmark") {
    CHECK(ftk_report_generate(dir.file("results.csv").c_str(),
                              dir.file("estimates.csv").c_str(), 3, "z",
                              dir.file("report.csv").c_str()) == FTK_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ftk_last_error()).find("out of range") != std::string::npos);
  }

  ftk_result_free(ekf);
  ftk_result_free(ukf);
  ftk_trajectory_free(trajectory);
}
