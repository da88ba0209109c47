#include "scanstress/eval/scene.hpp"

#include <cmath>

#include "scanstress/rng.hpp"

namespace scanstress {

namespace {

constexpr double kRayEpsilon = 1e-9;

// Corridor kept free of obstacles so rendered sensor paths stay in open
// space regardless of the seed.
constexpr double kClearHalfWidth = 1.0;

void sample_rect(std::vector<SurfaceSample>& out, const Eigen::Vector3d& corner,
                 const Eigen::Vector3d& edge_u, const Eigen::Vector3d& edge_v,
                 const Eigen::Vector3d& normal, double spacing) {
  const double len_u = edge_u.norm();
  const double len_v = edge_v.norm();
  const int nu = std::max(1, static_cast<int>(std::floor(len_u / spacing)));
  const int nv = std::max(1, static_cast<int>(std::floor(len_v / spacing)));
  for (int i = 0; i <= nu; ++i) {
    for (int j = 0; j <= nv; ++j) {
      const double fu = static_cast<double>(i) / nu;
      const double fv = static_cast<double>(j) / nv;
      out.push_back({corner + fu * edge_u + fv * edge_v, normal});
    }
  }
}

void sample_box_exterior(std::vector<SurfaceSample>& out, const Aabb& box, double spacing) {
  const Eigen::Vector3d d = box.max - box.min;
  const Eigen::Vector3d ex(d.x(), 0, 0), ey(0, d.y(), 0), ez(0, 0, d.z());
  sample_rect(out, box.min, ey, ez, {-1, 0, 0}, spacing);
  sample_rect(out, {box.max.x(), box.min.y(), box.min.z()}, ey, ez, {1, 0, 0}, spacing);
  sample_rect(out, box.min, ex, ez, {0, -1, 0}, spacing);
  sample_rect(out, {box.min.x(), box.max.y(), box.min.z()}, ex, ez, {0, 1, 0}, spacing);
  sample_rect(out, {box.min.x(), box.min.y(), box.max.z()}, ex, ey, {0, 0, 1}, spacing);
}

}  // namespace

Scene generate_scene(std::uint64_t seed) {
  Scene scene;
  scene.room.min = {-6.0, -4.5, 0.0};
  scene.room.max = {6.0, 4.5, 3.0};

  RandomStream stream(seed, 0x5CE7E);

  const int box_count = 4 + static_cast<int>(stream.next_u64() % 3);  // 4..6
  for (int b = 0; b < box_count; ++b) {
    Aabb box;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double sx = 0.4 + 0.9 * stream.next_unit();
      const double sy = 0.4 + 0.9 * stream.next_unit();
      const double sz = 0.5 + 1.3 * stream.next_unit();
      const double cx = -5.0 + 10.0 * stream.next_unit();
      const double cy = -3.6 + 7.2 * stream.next_unit();
      box.min = {cx - sx / 2, cy - sy / 2, 0.0};
      box.max = {cx + sx / 2, cy + sy / 2, sz};
      const bool blocks_corridor =
          box.min.y() < kClearHalfWidth && box.max.y() > -kClearHalfWidth;
      if (!blocks_corridor) break;
    }
    scene.boxes.push_back(box);
  }

  const int pillar_count = 2 + static_cast<int>(stream.next_u64() % 3);  // 2..4
  for (int p = 0; p < pillar_count; ++p) {
    Pillar pillar;
    for (int attempt = 0; attempt < 64; ++attempt) {
      pillar.radius = 0.15 + 0.2 * stream.next_unit();
      pillar.center = {-5.0 + 10.0 * stream.next_unit(), -3.6 + 7.2 * stream.next_unit()};
      pillar.z_min = 0.0;
      pillar.z_max = scene.room.max.z();
      const bool blocks_corridor =
          std::fabs(pillar.center.y()) < kClearHalfWidth + pillar.radius;
      if (!blocks_corridor) break;
    }
    scene.pillars.push_back(pillar);
  }

  // Dense deterministic surface samples (0.15 m grid).
  const double spacing = 0.15;
  const Aabb& room = scene.room;
  const Eigen::Vector3d d = room.max - room.min;
  const Eigen::Vector3d ex(d.x(), 0, 0), ey(0, d.y(), 0), ez(0, 0, d.z());
  // Room shell: normals point into the interior.
  sample_rect(scene.samples, room.min, ey, ez, {1, 0, 0}, spacing);
  sample_rect(scene.samples, {room.max.x(), room.min.y(), room.min.z()}, ey, ez, {-1, 0, 0},
              spacing);
  sample_rect(scene.samples, room.min, ex, ez, {0, 1, 0}, spacing);
  sample_rect(scene.samples, {room.min.x(), room.max.y(), room.min.z()}, ex, ez, {0, -1, 0},
              spacing);
  sample_rect(scene.samples, room.min, ex, ey, {0, 0, 1}, spacing);
  sample_rect(scene.samples, {room.min.x(), room.min.y(), room.max.z()}, ex, ey, {0, 0, -1},
              spacing);
  for (const Aabb& box : scene.boxes) sample_box_exterior(scene.samples, box, spacing);
  for (const Pillar& pillar : scene.pillars) {
    const int around = std::max(8, static_cast<int>(2.0 * M_PI * pillar.radius / spacing));
    const int vertical = std::max(2, static_cast<int>((pillar.z_max - pillar.z_min) / spacing));
    for (int i = 0; i < around; ++i) {
      const double angle = 2.0 * M_PI * i / around;
      const Eigen::Vector3d normal(std::cos(angle), std::sin(angle), 0.0);
      for (int j = 0; j <= vertical; ++j) {
        const double z = pillar.z_min + (pillar.z_max - pillar.z_min) * j / vertical;
        const Eigen::Vector3d position(pillar.center.x() + pillar.radius * normal.x(),
                                       pillar.center.y() + pillar.radius * normal.y(), z);
        scene.samples.push_back({position, normal});
      }
    }
  }
  return scene;
}

namespace {

// Exit distance from inside an axis-aligned box.
double room_exit(const Aabb& room, const Eigen::Vector3d& o, const Eigen::Vector3d& dir) {
  double t_exit = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (dir[axis] > kRayEpsilon) {
      t_exit = std::min(t_exit, (room.max[axis] - o[axis]) / dir[axis]);
    } else if (dir[axis] < -kRayEpsilon) {
      t_exit = std::min(t_exit, (room.min[axis] - o[axis]) / dir[axis]);
    }
  }
  return t_exit;
}

// Slab-method entry distance for a box hit from outside.
std::optional<double> box_entry(const Aabb& box, const Eigen::Vector3d& o,
                                const Eigen::Vector3d& dir) {
  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::fabs(dir[axis]) <= kRayEpsilon) {
      if (o[axis] < box.min[axis] || o[axis] > box.max[axis]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[axis] - o[axis]) / dir[axis];
    double t1 = (box.max[axis] - o[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_near <= kRayEpsilon) return std::nullopt;  // origin inside or behind
  return t_near;
}

std::optional<double> pillar_entry(const Pillar& pillar, const Eigen::Vector3d& o,
                                   const Eigen::Vector3d& dir) {
  const double dx = dir.x(), dy = dir.y();
  const double ox = o.x() - pillar.center.x();
  const double oy = o.y() - pillar.center.y();
  const double a = dx * dx + dy * dy;
  if (a <= kRayEpsilon * kRayEpsilon) return std::nullopt;
  const double b = 2.0 * (ox * dx + oy * dy);
  const double c = ox * ox + oy * oy - pillar.radius * pillar.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sqrt_disc = std::sqrt(disc);
  for (double t : {(-b - sqrt_disc) / (2.0 * a), (-b + sqrt_disc) / (2.0 * a)}) {
    if (t <= kRayEpsilon) continue;
    const double z = o.z() + t * dir.z();
    if (z >= pillar.z_min && z <= pillar.z_max) return t;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> raycast(const Scene& scene, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction) {
  double best = room_exit(scene.room, origin, direction);
  if (!std::isfinite(best)) return std::nullopt;
  for (const Aabb& box : scene.boxes) {
    if (const auto t = box_entry(box, origin, direction)) best = std::min(best, *t);
  }
  for (const Pillar& pillar : scene.pillars) {
    if (const auto t = pillar_entry(pillar, origin, direction)) best = std::min(best, *t);
  }
  if (!(best > 0.0)) return std::nullopt;
  return best;
}

}  // namespace scanstress
