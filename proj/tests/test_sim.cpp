#include <doctest.h>

#include <cmath>

#include "scanstress/errors.hpp"
#include "scanstress/eval/icp.hpp"
#include "scanstress/eval/kdtree.hpp"
#include "scanstress/eval/render.hpp"
#include "scanstress/eval/scene.hpp"
#include "scanstress/eval/sweep.hpp"
#include "scanstress/rng.hpp"

using namespace scanstress;

namespace {

// Unsigned distance from a point to the nearest declared surface.
double surface_distance(const Scene& scene, const Eigen::Vector3d& p) {
  double best = std::numeric_limits<double>::infinity();
  const auto face_distance = [&](const Aabb& box, const Eigen::Vector3d& q) {
    // distance to the box boundary (inside or outside)
    const Eigen::Vector3d clamped = q.cwiseMax(box.min).cwiseMin(box.max);
    const double outside = (q - clamped).norm();
    if (outside > 0.0) return outside;
    double inside = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
      inside = std::min(inside, q[axis] - box.min[axis]);
      inside = std::min(inside, box.max[axis] - q[axis]);
    }
    return inside;
  };
  best = std::min(best, face_distance(scene.room, p));
  for (const Aabb& box : scene.boxes) best = std::min(best, face_distance(box, p));
  for (const Pillar& pillar : scene.pillars) {
    const double radial =
        std::fabs((Eigen::Vector2d(p.x(), p.y()) - pillar.center).norm() - pillar.radius);
    if (p.z() >= pillar.z_min - 1e-9 && p.z() <= pillar.z_max + 1e-9) {
      best = std::min(best, radial);
    }
  }
  return best;
}

RigidTransform make_transform(double angle_rad, const Eigen::Vector3d& axis,
                              const Eigen::Vector3d& translation) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
  t.translation = translation;
  return t;
}

}  // namespace

TEST_CASE("kdtree nearest agrees with exhaustive search") {
  RandomStream stream(61, 0);
  std::vector<Eigen::Vector3d> points;
  for (int i = 0; i < 2000; ++i) points.push_back(next_normal3(stream) * 10.0);
  const KdTree3 tree(points);
  for (int q = 0; q < 300; ++q) {
    const Eigen::Vector3d query = next_normal3(stream) * 10.0;
    const auto hit = tree.nearest(query);
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d2 = (points[i] - query).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    CHECK(hit.index == best);
    CHECK(hit.squared_distance == doctest::Approx(best_d2));
  }
}

TEST_CASE("scene generation is deterministic per seed and varies across seeds") {
  const Scene a = generate_scene(42);
  const Scene b = generate_scene(42);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); i += 97) {
    CHECK(a.samples[i].position == b.samples[i].position);
  }
  REQUIRE(a.boxes.size() == b.boxes.size());

  const Scene c = generate_scene(43);
  bool differs = a.boxes.size() != c.boxes.size();
  for (std::size_t i = 0; !differs && i < std::min(a.boxes.size(), c.boxes.size()); ++i) {
    differs = a.boxes[i].min != c.boxes[i].min;
  }
  CHECK(differs);
}

TEST_CASE("scene samples lie on declared primitives with outward unit normals") {
  const Scene scene = generate_scene(7);
  CHECK(scene.samples.size() > 10000);
  for (std::size_t i = 0; i < scene.samples.size(); i += 53) {
    CHECK(surface_distance(scene, scene.samples[i].position) <= 1e-9);
    CHECK(scene.samples[i].normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("render_scan from inside the room is nonempty, in-FoV, on-surface") {
  const Scene scene = generate_scene(7);
  Pose pose;
  pose.timestamp = 5.0;
  pose.translation = {-2.0, 0.0, 1.3};
  const SensorProfile profile = make_profile(ProfileClass::kGeneric);
  RenderOptions options;
  options.azimuth_steps = 240;
  options.elevation_steps = 16;
  const auto frame = render_scan(scene, pose, profile, 10.0, options);

  CHECK(!frame.empty());
  CHECK(frame.base_time == 5.0);
  CHECK(frame.sensor_id == "generic");

  const double az_half = 0.5 * profile.nominal_azimuth_span_deg * M_PI / 180.0;
  const double el_half = nominal_elevation_half_deg(profile.profile_class) * M_PI / 180.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const Eigen::Vector3d& p = frame.positions[i];
    const auto [theta, phi] = spherical_coords(p);
    CHECK(std::fabs(theta) <= az_half + 1e-9);
    CHECK(std::fabs(phi) <= el_half + 1e-9);
    // range is the exact geometric distance: the point sits on a surface
    const Eigen::Vector3d world = pose.rotation * p + pose.translation;
    CHECK(surface_distance(scene, world) <= 1e-9);
    if (i > 0) CHECK(frame.time_offsets[i] >= frame.time_offsets[i - 1]);
  }
  CHECK(frame.time_offsets.back() < 0.1);
}

TEST_CASE("icp: identical clouds register to the identity") {
  const Scene scene = generate_scene(11);
  Pose pose;
  pose.translation = {0.0, 0.0, 1.2};
  RenderOptions options;
  options.azimuth_steps = 240;
  options.elevation_steps = 16;
  const auto frame = render_scan(scene, pose, make_profile(ProfileClass::kGeneric), 10.0, options);
  const auto transform = icp_register(frame, frame, {}, {});
  CHECK((transform.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(transform.translation.norm() < 1e-9);
}

TEST_CASE("icp recovers a small known rigid motion on a dense synthetic scan") {
  const Scene scene = generate_scene(11);
  Pose pose;
  pose.translation = {-1.0, 0.2, 1.2};
  RenderOptions options;
  options.azimuth_steps = 360;
  options.elevation_steps = 24;
  const auto source = render_scan(scene, pose, make_profile(ProfileClass::kGeneric), 10.0, options);

  // target = source under a known rigid motion (<= 0.2 m, <= 5 deg)
  const RigidTransform truth =
      make_transform(4.0 * M_PI / 180.0, {0.2, -0.3, 1.0}, {0.15, -0.1, 0.05});
  auto target = source;
  for (auto& p : target.positions) p = truth.apply(p);

  const auto estimate = icp_register(source, target, {}, {});
  CHECK((estimate.translation - truth.translation).norm() < 1e-3);
  const Eigen::AngleAxisd residual(estimate.rotation.transpose() * truth.rotation);
  CHECK(std::fabs(residual.angle()) < 0.1 * M_PI / 180.0);
}

TEST_CASE("icp with index-true correspondences is exact") {
  const Scene scene = generate_scene(11);
  Pose pose;
  pose.translation = {0.5, -0.5, 1.0};
  RenderOptions options;
  options.azimuth_steps = 240;
  options.elevation_steps = 16;
  const auto source = render_scan(scene, pose, make_profile(ProfileClass::kGeneric), 10.0, options);
  const RigidTransform truth =
      make_transform(3.0 * M_PI / 180.0, {0.0, 0.0, 1.0}, {0.12, 0.05, -0.03});
  auto target = source;
  for (auto& p : target.positions) p = truth.apply(p);

  IcpOptions hook;
  hook.correspondence_override = [](std::size_t i) { return i; };
  const auto estimate = icp_register(source, target, {}, hook);
  CHECK((estimate.translation - truth.translation).norm() < 1e-9);
  CHECK((estimate.rotation - truth.rotation).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("icp rejects disjoint clouds and empty frames") {
  PointCloudFrame a, b;
  for (int i = 0; i < 100; ++i) {
    a.positions.push_back({0.01 * i, 0.0, 0.0});
    a.time_offsets.push_back(0.0);
    b.positions.push_back({100.0 + 0.01 * i, 0.0, 0.0});
    b.time_offsets.push_back(0.0);
  }
  CHECK_THROWS_WITH_AS(icp_register(a, b, {}, {}), doctest::Contains("correspondences"),
                       EvalError);
  CHECK_THROWS_AS(icp_register(PointCloudFrame{}, a, {}, {}), EvalError);
}

TEST_CASE("odometry: a static sequence stays at the identity") {
  const Scene scene = generate_scene(13);
  Pose pose;
  pose.translation = {0.0, 0.5, 1.2};
  RenderOptions options;
  options.azimuth_steps = 240;
  options.elevation_steps = 16;
  auto frame = render_scan(scene, pose, make_profile(ProfileClass::kGeneric), 10.0, options);
  std::vector<PointCloudFrame> scans;
  for (int k = 0; k < 4; ++k) {
    frame.base_time = 0.1 * k;
    frame.frame_index = static_cast<std::uint64_t>(k);
    scans.push_back(frame);
  }
  const auto result = run_odometry(scans, {});
  CHECK(!result.failed_at.has_value());
  REQUIRE(result.trajectory.size() == 4);
  for (const Pose& p : result.trajectory.poses) {
    CHECK(p.translation.norm() < 1e-6);
    CHECK(std::fabs(Eigen::AngleAxisd(p.rotation).angle()) < 1e-6);
  }
}

TEST_CASE("odometry: noiseless straight line endpoint error under 1% of path") {
  TrajectorySpec spec;
  spec.frame_count = 8;
  spec.step = 0.3;
  spec.yaw_step = 0.0;
  const Scene scene = generate_scene(7);
  const auto scans = render_sequence(scene, spec, make_profile(ProfileClass::kGeneric), {});
  const auto result = run_odometry(scans, {});
  CHECK(!result.failed_at.has_value());
  REQUIRE(result.trajectory.size() == static_cast<std::size_t>(spec.frame_count));

  const auto truth = relative_to_first(ground_truth_trajectory(spec));
  const double path = spec.step * (spec.frame_count - 1);
  const double endpoint_error =
      (truth.poses.back().translation - result.trajectory.poses.back().translation).norm();
  CHECK(endpoint_error <= 0.01 * path);
}

TEST_CASE("odometry truncates at an empty frame and reports it") {
  const Scene scene = generate_scene(13);
  Pose pose;
  pose.translation = {0.0, 0.0, 1.2};
  RenderOptions options;
  options.azimuth_steps = 120;
  options.elevation_steps = 8;
  auto frame = render_scan(scene, pose, make_profile(ProfileClass::kGeneric), 10.0, options);
  std::vector<PointCloudFrame> scans;
  for (int k = 0; k < 4; ++k) {
    frame.base_time = 0.1 * k;
    scans.push_back(frame);
  }
  scans[2].positions.clear();
  scans[2].time_offsets.clear();
  for (auto& column : scans[2].attributes) column.values.clear();

  const auto result = run_odometry(scans, {});
  REQUIRE(result.failed_at.has_value());
  CHECK(*result.failed_at == 2);
  CHECK(result.trajectory.size() == 2);
  CHECK(!result.failure_reason.empty());
}

TEST_CASE("severity sweep: disabled modules reproduce the clean baseline exactly") {
  ScenarioConfig config = default_scenario();
  config.module_chain.clear();  // every module disabled

  SweepOptions options;
  options.trajectory.frame_count = 5;
  options.trajectory.step = 0.3;
  options.render.azimuth_steps = 300;
  options.render.elevation_steps = 20;

  const std::array<Tier, 1> tiers = {Tier::kExtreme};
  const auto result = severity_sweep(3, config, tiers, 2, options);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].failures == 0);
  // Identical inputs per repeat: pooled stats collapse onto the baseline.
  CHECK(result.cells[0].ape.mean == result.clean_baseline.mean);
  CHECK(result.cells[0].ape.median == result.clean_baseline.median);
  CHECK(result.cells[0].ape.max == result.clean_baseline.max);

  const auto again = severity_sweep(3, config, tiers, 2, options);
  CHECK(again.cells[0].ape.mean == result.cells[0].ape.mean);
  CHECK(again.cells[0].ape.rmse == result.cells[0].ape.rmse);
}
