#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "scanstress/errors.hpp"
#include "scanstress/imu.hpp"
#include "scanstress/kernels.hpp"
#include "scanstress/rng.hpp"
#include "test_helpers.hpp"

using namespace scanstress;

namespace {

// Test-local exact Rodrigues oracle, independent of the library path.
Eigen::Matrix3d exact_rodrigues(const Eigen::Vector3d& aa) {
  const double angle = aa.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d axis = aa / angle;
  Eigen::Matrix3d K;
  K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * K +
         (1.0 - std::cos(angle)) * (K * K);
}

Eigen::Vector3d random_axis_angle(RandomStream& stream, double lo, double hi) {
  Eigen::Vector3d direction;
  do {
    direction = next_normal3(stream);
  } while (direction.norm() < 1e-12);
  direction.normalize();
  return direction * (lo + (hi - lo) * stream.next_unit());
}

}  // namespace

TEST_CASE("rotation_from_axis_angle basics") {
  CHECK(rotation_from_axis_angle(Eigen::Vector3d::Zero()) == Eigen::Matrix3d::Identity());

  // Quarter turn about z maps x onto y.
  const Eigen::Matrix3d quarter = rotation_from_axis_angle({0, 0, M_PI / 2});
  const Eigen::Vector3d rotated = quarter * Eigen::Vector3d(1, 0, 0);
  CHECK((rotated - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("exact branch is orthogonal with unit determinant to 1e-12") {
  RandomStream stream(31, 0);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d aa = random_axis_angle(stream, 0.1, M_PI);
    const Eigen::Matrix3d r = rotation_from_axis_angle(aa);
    worst_orth = std::max(worst_orth,
                          (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    worst_det = std::max(worst_det, std::fabs(r.determinant() - 1.0));
  }
  CHECK(worst_orth <= 1e-12);
  CHECK(worst_det <= 1e-12);
}

TEST_CASE("first-order branch error vs exact Rodrigues obeys the Taylor bound") {
  RandomStream stream(32, 0);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Vector3d aa = random_axis_angle(stream, 1e-6, 0.0999);
    const Eigen::Matrix3d approx = rotation_from_axis_angle(aa);
    const Eigen::Matrix3d exact = exact_rodrigues(aa);
    const double bound = 0.5 * aa.squaredNorm();
    CHECK((approx - exact).cwiseAbs().maxCoeff() <= bound);
  }
  // Spot value from the operation contract: |aa| = 0.05 -> bound 1.25e-3.
  const Eigen::Vector3d aa = Eigen::Vector3d(1, 2, 2).normalized() * 0.05;
  CHECK((rotation_from_axis_angle(aa) - exact_rodrigues(aa)).cwiseAbs().maxCoeff() <= 1.25e-3);
}

TEST_CASE("motion distortion: zero motion is the identity") {
  const auto frame = testing::make_random_frame(41, {.points = 300});
  CHECK(frames_equal(apply_motion_distortion(frame, {}), frame));
}

TEST_CASE("motion distortion displaces by v * dt") {
  PointCloudFrame frame;
  frame.positions.push_back({2.0, -1.0, 0.5});
  frame.time_offsets.push_back(0.05);
  MotionEstimate motion;
  motion.linear_velocity = {1.0, 0.0, 0.0};
  const auto out = apply_motion_distortion(frame, motion);
  CHECK(out.positions[0].x() == doctest::Approx(2.05).epsilon(1e-12));
  CHECK(out.positions[0].y() == -1.0);
  CHECK(out.positions[0].z() == 0.5);
  CHECK(out.time_offsets == frame.time_offsets);
}

TEST_CASE("motion distortion small-angle branch stays within the Taylor bound") {
  PointCloudFrame frame;
  frame.positions.push_back({3.0, 1.0, -2.0});
  frame.time_offsets.push_back(0.06);
  MotionEstimate motion;
  motion.angular_velocity = {0.0, 0.0, 0.5};  // |w*dt| = 0.03 < 0.1

  const auto out = apply_motion_distortion(frame, motion);
  const Eigen::Vector3d aa = motion.angular_velocity * frame.time_offsets[0];
  const Eigen::Vector3d exact = exact_rodrigues(aa) * frame.positions[0];
  // elementwise matrix bound propagated through the product
  const double bound = 0.5 * aa.squaredNorm() * frame.positions[0].cwiseAbs().sum();
  CHECK((out.positions[0] - exact).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("motion distortion preserves count, order, attributes and offsets") {
  const auto frame = testing::make_random_frame(42, {.points = 1500, .with_ring = true});
  MotionEstimate motion;
  motion.linear_velocity = {1.5, -0.3, 0.2};
  motion.angular_velocity = {0.1, 0.0, 0.45};
  const auto out = apply_motion_distortion(frame, motion);
  REQUIRE(out.size() == frame.size());
  CHECK(out.time_offsets == frame.time_offsets);
  for (std::size_t c = 0; c < frame.attributes.size(); ++c) {
    CHECK(out.attributes[c].values == frame.attributes[c].values);
  }
  CHECK(frames_equal(apply_motion_distortion(frame, motion, Exec{1}),
                     apply_motion_distortion(frame, motion, Exec{4})));
}

TEST_CASE("estimate_velocity integrates constant acceleration exactly") {
  std::vector<ImuSample> buffer;
  for (int i = 0; i <= 20; ++i) {
    ImuSample sample;
    sample.timestamp = 0.01 * i;
    sample.linear_acceleration = {1.0, 0.0, 0.0};
    buffer.push_back(sample);
  }
  const auto estimate = estimate_velocity(buffer, 0.05, 0.15, Eigen::Vector3d::Zero());
  CHECK(estimate.linear_velocity.x() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(estimate.linear_velocity.y() == 0.0);
  CHECK(estimate.angular_velocity.norm() == 0.0);
}

TEST_CASE("estimate_velocity returns the time-weighted mean angular velocity") {
  std::vector<ImuSample> buffer;
  for (int i = 0; i <= 10; ++i) {
    ImuSample sample;
    sample.timestamp = 0.02 * i;
    sample.angular_velocity = {0.0, 0.0, 0.5};
    buffer.push_back(sample);
  }
  const auto estimate = estimate_velocity(buffer, 0.0, 0.2, Eigen::Vector3d(1, 2, 3));
  CHECK(estimate.linear_velocity == Eigen::Vector3d(1, 2, 3));
  CHECK(estimate.angular_velocity.z() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("trapezoidal integration is exact on piecewise-linear acceleration") {
  // a(t) = (2t, -t + 0.3, 0.5): linear, so the trapezoid rule is exact on
  // sample-aligned intervals. Integral over [t0, t1]:
  //   ax: t1^2 - t0^2; ay: -(t1^2 - t0^2)/2 + 0.3 (t1 - t0); az: 0.5 (t1 - t0)
  std::vector<ImuSample> buffer;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.01 * i;  // 100 Hz over one second
    ImuSample sample;
    sample.timestamp = t;
    sample.linear_acceleration = {2.0 * t, -t + 0.3, 0.5};
    sample.angular_velocity = {0.1 * t, 0.0, 0.2};
    buffer.push_back(sample);
  }
  const double t0 = 0.13, t1 = 0.77;
  const auto estimate = estimate_velocity(buffer, t0, t1, Eigen::Vector3d::Zero());
  CHECK(estimate.linear_velocity.x() == doctest::Approx(t1 * t1 - t0 * t0).epsilon(1e-12));
  CHECK(estimate.linear_velocity.y() ==
        doctest::Approx(-(t1 * t1 - t0 * t0) / 2 + 0.3 * (t1 - t0)).epsilon(1e-12));
  CHECK(estimate.linear_velocity.z() == doctest::Approx(0.5 * (t1 - t0)).epsilon(1e-12));
  // time-weighted mean of (0.1 t, 0, 0.2) over [t0, t1] = (0.05 (t1+t0), 0, 0.2)
  CHECK(estimate.angular_velocity.x() == doctest::Approx(0.05 * (t1 + t0)).epsilon(1e-12));
  CHECK(estimate.angular_velocity.z() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("estimate_velocity rejects bad windows and non-covering buffers") {
  std::vector<ImuSample> buffer;
  for (int i = 0; i <= 5; ++i) {
    ImuSample sample;
    sample.timestamp = 0.1 * i;
    buffer.push_back(sample);
  }
  CHECK_THROWS_AS(estimate_velocity({}, 0.0, 0.1, Eigen::Vector3d::Zero()), EvalError);
  CHECK_THROWS_AS(estimate_velocity(buffer, 0.2, 0.2, Eigen::Vector3d::Zero()), EvalError);
  CHECK_THROWS_AS(estimate_velocity(buffer, -0.1, 0.2, Eigen::Vector3d::Zero()), EvalError);
  CHECK_THROWS_AS(estimate_velocity(buffer, 0.3, 0.9, Eigen::Vector3d::Zero()), EvalError);

  auto unsorted = buffer;
  std::swap(unsorted[1], unsorted[2]);
  CHECK_THROWS_AS(estimate_velocity(unsorted, 0.0, 0.4, Eigen::Vector3d::Zero()), EvalError);
}
