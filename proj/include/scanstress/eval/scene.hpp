#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace scanstress {

struct Aabb {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

// Vertical cylinder spanning [z_min, z_max].
struct Pillar {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.2;
  double z_min = 0.0;
  double z_max = 3.0;
};

struct SurfaceSample {
  Eigen::Vector3d position;
  Eigen::Vector3d normal;  // outward (into the free space)
};

// Synthetic indoor environment: an axis-aligned room shell with seeded
// boxes and pillars, plus a deterministic dense set of surface samples.
struct Scene {
  Aabb room;
  std::vector<Aabb> boxes;
  std::vector<Pillar> pillars;
  std::vector<SurfaceSample> samples;
};

Scene generate_scene(std::uint64_t seed);

// Nearest forward intersection of the ray origin + t * direction with the
// scene (room interior walls, box exteriors, pillar sides). direction must
// be unit length. Returns the hit range t, or nullopt when nothing is hit.
std::optional<double> raycast(const Scene& scene, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction);

}  // namespace scanstress
