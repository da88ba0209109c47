#include "scanstress/eval/render.hpp"

#include <cmath>

#include "scanstress/rng.hpp"

namespace scanstress {

double nominal_elevation_half_deg(ProfileClass cls) {
  switch (cls) {
    case ProfileClass::kOusterLike: return 45.0;
    case ProfileClass::kLivoxAviaLike: return 38.5;
    case ProfileClass::kLivoxMid360Like: return 29.5;
    case ProfileClass::kGeneric: return 30.0;
  }
  return 30.0;
}

PointCloudFrame render_scan(const Scene& scene, const Pose& pose, const SensorProfile& profile,
                            double rate_hz, const RenderOptions& options) {
  const double deg = M_PI / 180.0;
  const double az_half = 0.5 * profile.nominal_azimuth_span_deg * deg;
  const double el_half = (options.elevation_half_deg > 0.0
                              ? options.elevation_half_deg
                              : nominal_elevation_half_deg(profile.profile_class)) *
                         deg;
  const double period = 1.0 / rate_hz;

  PointCloudFrame frame;
  frame.sensor_id = profile_class_name(profile.profile_class);
  frame.base_time = pose.timestamp;
  frame.attributes.push_back({"intensity", ScalarType::F32, {}});
  frame.reserve(static_cast<std::size_t>(options.azimuth_steps) * options.elevation_steps);

  const Eigen::Matrix3d rotation = pose.rotation.toRotationMatrix();
  const std::size_t total_rays =
      static_cast<std::size_t>(options.azimuth_steps) * options.elevation_steps;

  RandomStream jitter(options.ray_jitter_seed, 0xD1CE);
  std::size_t ray_index = 0;
  for (int a = 0; a < options.azimuth_steps; ++a) {
    for (int e = 0; e < options.elevation_steps; ++e, ++ray_index) {
      // Sweep azimuth across the span; rays within one column share time.
      double da = 0.5, de = 0.5;
      if (options.ray_jitter > 0.0) {
        da += options.ray_jitter * (jitter.next_unit() - 0.5);
        de += options.ray_jitter * (jitter.next_unit() - 0.5);
      }
      const double azimuth = -az_half + (2.0 * az_half) * (a + da) / options.azimuth_steps;
      const double elevation = -el_half + (2.0 * el_half) * (e + de) / options.elevation_steps;
      const Eigen::Vector3d dir_sensor(std::cos(elevation) * std::cos(azimuth),
                                       std::cos(elevation) * std::sin(azimuth),
                                       std::sin(elevation));
      const Eigen::Vector3d dir_world = rotation * dir_sensor;
      const auto range = raycast(scene, pose.translation, dir_world);
      if (!range || *range > options.max_range) continue;
      const double offset = period * static_cast<double>(ray_index) / total_rays;
      const float intensity = static_cast<float>(100.0 / (1.0 + *range));
      frame.push_point(dir_sensor * *range, offset, {static_cast<double>(intensity)});
    }
  }
  return frame;
}

}  // namespace scanstress
