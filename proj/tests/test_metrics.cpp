#include <doctest.h>

#include "facetrack/errors.hpp"
#include "facetrack/metrics.hpp"
#include "oracles.hpp"

using facetrack::MseSeries;
using facetrack::Vec;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

MseSeries series_of(std::initializer_list<double> values) {
  MseSeries s;
  s.values = values;
  s.filter_label = "EKF";
  s.user_label = "user0";
  return s;
}

}  // namespace

TEST_CASE("mse_at_step examples") {
  CHECK(facetrack::mse_at_step(make_vec({1, 2, 3}), make_vec({1, 2, 3})) == 0.0);
  CHECK(facetrack::mse_at_step(make_vec({2, 2, 3}), make_vec({1, 2, 3})) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // (9 + 16) / 2
  CHECK(facetrack::mse_at_step(make_vec({0, 0}), make_vec({3, 4})) ==
        doctest::Approx(12.5).epsilon(1e-15));
  CHECK_THROWS_AS(facetrack::mse_at_step(make_vec({1, 2}), make_vec({1, 2, 3})),
                  facetrack::DimensionError);
}

TEST_CASE("mae_at_step is the mean absolute difference") {
  CHECK(facetrack::mae_at_step(make_vec({0, 0}), make_vec({3, -4})) ==
        doctest::Approx(3.5).epsilon(1e-15));
  CHECK(facetrack::mae_at_step(make_vec({1, 2}), make_vec({1, 2})) == 0.0);
}

TEST_CASE("mse_at_step matches the brute-force loop on random vectors") {
  oracles::TestRng rng(3001);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0.0, 162.0));
    const Vec a = rng.vec(n, -100.0, 100.0);
    const Vec b = rng.vec(n, -100.0, 100.0);
    REQUIRE(facetrack::mse_at_step(a, b) ==
            doctest::Approx(oracles::brute_force_mse(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("mse_at_step properties") {
  oracles::TestRng rng(3002);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec x = rng.vec(12, -50.0, 50.0);
    const Vec y = rng.vec(12, -50.0, 50.0);
    CHECK(facetrack::mse_at_step(x, x) == 0.0);
    CHECK(facetrack::mse_at_step(x, y) == facetrack::mse_at_step(y, x));
    CHECK(facetrack::mse_at_step(x, y) >= 0.0);
  }
}

TEST_CASE("average_series") {
  SUBCASE("mean of one is itself") {
    const auto s = series_of({0.5, 1.5});
    const auto averaged = facetrack::average_series({s});
    CHECK(averaged.values == s.values);
    CHECK(averaged.filter_label == s.filter_label);
  }
  SUBCASE("pointwise mean") {
    const auto averaged =
        facetrack::average_series({series_of({0, 2, 4}), series_of({2, 2, 0})});
    CHECK(averaged.values == std::vector<double>{1.0, 2.0, 2.0});
  }
  SUBCASE("100 copies of a constant series reproduce it exactly") {
    const auto s = series_of({0.1, 0.3});
    std::vector<MseSeries> copies(100, s);
    const auto averaged = facetrack::average_series(copies);
    CHECK(averaged.values == s.values);
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(facetrack::average_series({}), facetrack::InvalidArgumentError);
  }
  SUBCASE("ragged lengths are rejected") {
    CHECK_THROWS_AS(facetrack::average_series({series_of({1, 2}), series_of({1})}),
                    facetrack::DimensionError);
  }
  SUBCASE("mismatched labels are rejected") {
    auto a = series_of({1, 2});
    auto b = series_of({1, 2});
    b.filter_label = "UKF";
    CHECK_THROWS_AS(facetrack::average_series({a, b}), facetrack::InvalidArgumentError);
  }
}
