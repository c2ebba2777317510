#include <doctest.h>

#include <cmath>
#include <limits>

#include "facetrack/errors.hpp"
#include "facetrack/statespace.hpp"
#include "oracles.hpp"

using facetrack::Mat;
using facetrack::Vec;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("constant_position_transition returns the state unchanged") {
  const Vec x = make_vec({1.0, 2.0, 3.0});
  CHECK(facetrack::constant_position_transition(x, 0.01) == x);

  const Vec zeros = Vec::Zero(162);
  CHECK(facetrack::constant_position_transition(zeros, 1.0) == zeros);
}

TEST_CASE("constant_position_model Jacobian is the identity") {
  const auto model = facetrack::constant_position_model();
  const Vec x = Vec::Zero(162);
  const Mat jac = model.jacobian(x, 0.01);
  CHECK((jac - Mat::Identity(162, 162)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant_position_transition rejects non-finite input") {
  Vec x = make_vec({1.0, 2.0});
  x(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(facetrack::constant_position_transition(x, 0.01),
                  facetrack::InvalidStateError);
}

TEST_CASE("constant_position_transition is idempotent") {
  oracles::TestRng rng(11);
  Vec x = rng.vec(9, -50.0, 50.0);
  const Vec once = facetrack::constant_position_transition(x, 0.01);
  Vec repeated = x;
  for (int i = 0; i < 5; ++i) {
    repeated = facetrack::constant_position_transition(repeated, 0.01);
  }
  CHECK(repeated == once);
}

TEST_CASE("random_walk_transition applies x + v*dt + w") {
  SUBCASE("zero velocity and noise") {
    const Vec x = make_vec({1.0, 1.0});
    const Vec zero = Vec::Zero(2);
    CHECK(facetrack::random_walk_transition(x, zero, zero, 0.01) == x);
  }
  SUBCASE("direct arithmetic") {
    const Vec x = make_vec({0.0, 0.0});
    const Vec v = make_vec({100.0, -100.0});
    const Vec w = make_vec({0.5, 0.5});
    const Vec got = facetrack::random_walk_transition(x, v, w, 0.01);
    CHECK(got(0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(got(1) == doctest::Approx(-0.5).epsilon(1e-15));
  }
  SUBCASE("dt must be positive") {
    const Vec x = make_vec({2.0});
    const Vec v = make_vec({1.0});
    const Vec w = make_vec({-0.01});
    CHECK_THROWS_AS(facetrack::random_walk_transition(x, v, w, 0.0),
                    facetrack::InvalidArgumentError);
  }
  SUBCASE("length mismatch") {
    const Vec x = make_vec({1.0, 2.0});
    const Vec v = make_vec({1.0});
    const Vec w = Vec::Zero(2);
    CHECK_THROWS_AS(facetrack::random_walk_transition(x, v, w, 0.01),
                    facetrack::DimensionError);
  }
}

TEST_CASE("random_walk_transition with zero noise matches constant position") {
  oracles::TestRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = rng.vec(6, -100.0, 100.0);
    const Vec zero = Vec::Zero(6);
    const double dt = rng.uniform(1e-3, 1.0);
    CHECK(facetrack::random_walk_transition(x, zero, zero, dt) ==
          facetrack::constant_position_transition(x, dt));
  }
}

TEST_CASE("identity_measurement returns the state and identity Jacobian") {
  const Vec x = make_vec({1.0, 2.0, 3.0});
  CHECK(facetrack::identity_measurement(x) == x);
  CHECK(facetrack::identity_measurement(Vec::Zero(162)) == Vec::Zero(162));

  const auto model = facetrack::identity_measurement_model(162);
  const Mat jac = model.jacobian(Vec::Zero(162));
  CHECK((jac - Mat::Identity(162, 162)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("finite_difference_jacobian on reference functions") {
  SUBCASE("identity map") {
    const Vec x = make_vec({0.5, -2.0, 3.0});
    const Mat jac = facetrack::finite_difference_jacobian(
        [](const Vec& v) { return v; }, x, 1e-6);
    CHECK((jac - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("scalar square: derivative of x^2 at 3 is 6") {
    const Vec x = make_vec({3.0});
    const Mat jac = facetrack::finite_difference_jacobian(
        [](const Vec& v) { return make_vec({v(0) * v(0)}); }, x, 1e-5);
    CHECK(jac(0, 0) == doctest::Approx(6.0).epsilon(1e-6));
  }
  SUBCASE("constant map has zero Jacobian") {
    const Vec x = make_vec({1.0, 2.0});
    const Mat jac = facetrack::finite_difference_jacobian(
        [](const Vec&) { return make_vec({42.0, -1.0}); }, x, 1e-6);
    CHECK(jac.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("eps must be positive") {
    CHECK_THROWS_AS(facetrack::finite_difference_jacobian(
                        [](const Vec& v) { return v; }, make_vec({1.0}), 0.0),
                    facetrack::InvalidArgumentError);
  }
  SUBCASE("non-finite evaluation") {
    CHECK_THROWS_AS(facetrack::finite_difference_jacobian(
                        [](const Vec& v) {
                          return make_vec({std::log(v(0))});  // NaN for negative probes
                        },
                        make_vec({0.0}), 1e-3),
                    facetrack::NumericError);
  }
}

TEST_CASE("finite differences recover random linear maps within 10*eps") {
  oracles::TestRng rng(31);
  const double eps = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const Mat a = rng.mat(n, n, -2.0, 2.0);
    const Vec x = rng.vec(n, -5.0, 5.0);
    const Mat jac = facetrack::finite_difference_jacobian(
        [&a](const Vec& v) { return (a * v).eval(); }, x, eps);
    CHECK((jac - a).cwiseAbs().maxCoeff() < 10.0 * eps);
  }
}

TEST_CASE("NoiseSpec::isotropic builds exactly diagonal covariances") {
  const auto spec = facetrack::NoiseSpec::isotropic(6, 0.1, 0.5, 1.0);
  CHECK(spec.process_cov.isDiagonal(0.0));
  CHECK(spec.measurement_cov.isDiagonal(0.0));
  CHECK(spec.process_cov(0, 0) == doctest::Approx(0.01));
  CHECK(spec.measurement_cov(0, 0) == doctest::Approx(0.25));
  CHECK(spec.velocity_sigma == 1.0);
  CHECK(spec.measurement_sigma == 0.5);
  CHECK_THROWS_AS(facetrack::NoiseSpec::isotropic(3, -0.1, 0.5),
                  facetrack::InvalidArgumentError);
}
