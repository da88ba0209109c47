#pragma once

#include <cstdint>

#include "scanstress/eval/scene.hpp"
#include "scanstress/eval/trajectory.hpp"
#include "scanstress/frame.hpp"
#include "scanstress/io/detect.hpp"

namespace scanstress {

struct RenderOptions {
  int azimuth_steps = 480;
  int elevation_steps = 32;
  double max_range = 80.0;  // meters
  // Per-ray angular jitter, as a fraction of one grid cell. Consecutive
  // real scans never sample a surface at identical grid positions; jitter
  // reproduces that and keeps frame-to-frame registration
  // well-conditioned. 0 disables it.
  double ray_jitter = 0.0;
  std::uint64_t ray_jitter_seed = 0;
  // Overrides the profile-class elevation half-span when positive.
  double elevation_half_deg = 0.0;
};

// Elevation half-spans used when rendering each profile class.
double nominal_elevation_half_deg(ProfileClass cls);

// Ray-casts the scene from the pose over the profile's nominal FoV.
// Points are in the sensor frame, ranges are exact geometric distances,
// time offsets rise linearly with scan order over the period 1/rate_hz,
// and a range-dependent intensity attribute is attached.
PointCloudFrame render_scan(const Scene& scene, const Pose& pose, const SensorProfile& profile,
                            double rate_hz, const RenderOptions& options = {});

}  // namespace scanstress
