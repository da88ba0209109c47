#include "scanstress/kernels.hpp"

#include <cmath>

#include <Eigen/Geometry>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scanstress/errors.hpp"
#include "scanstress/rng.hpp"

namespace scanstress {

namespace {

#ifdef _OPENMP
int resolve_threads(const Exec& exec) {
  return exec.threads > 0 ? exec.threads : omp_get_max_threads();
}
#else
int resolve_threads(const Exec&) { return 1; }
#endif

// Sub-stream key for occlusion center sampling, distinct from the
// per-point keys (which are the point indices).
constexpr std::uint64_t kCenterStreamKey = 0x0CC1'0000'0000'0001ull;

}  // namespace

std::pair<double, double> spherical_coords(const Eigen::Vector3d& p) {
  const double norm = std::sqrt(p.x() * p.x() + p.y() * p.y() + p.z() * p.z());
  if (norm == 0.0) throw Error("spherical_coords: zero-norm point has no direction");
  const double theta = std::atan2(p.y(), p.x());
  double ratio = p.z() / norm;
  if (ratio > 1.0) ratio = 1.0;
  if (ratio < -1.0) ratio = -1.0;
  return {theta, std::asin(ratio)};
}

PointCloudFrame apply_dropout(const PointCloudFrame& frame, double ratio, std::uint64_t seed,
                              const Exec& exec) {
  if (ratio <= 0.0) return frame;
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  std::vector<std::uint8_t> keep(frame.size(), 0);
  const double keep_prob = 1.0 - ratio;
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    RandomStream stream(seed, static_cast<std::uint64_t>(i));
    keep[i] = stream.next_unit() < keep_prob ? 1 : 0;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_structured_dropout(const PointCloudFrame& frame, const SectorParams& sector,
                                         const Exec& exec) {
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  std::vector<std::uint8_t> keep(frame.size(), 1);
  const double start = sector.azimuth_start;
  const double extent = sector.azimuth_extent;
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = frame.positions[i];
    const double theta = std::atan2(p.y(), p.x());
    double delta = std::fmod(theta - start, 2.0 * M_PI);
    if (delta < 0.0) delta += 2.0 * M_PI;
    keep[i] = delta < extent ? 0 : 1;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_fov_reduction(const PointCloudFrame& frame, double theta_max, double phi_max,
                                    const Exec& exec) {
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  std::vector<std::uint8_t> keep(frame.size(), 0);
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = frame.positions[i];
    const double norm = std::sqrt(p.x() * p.x() + p.y() * p.y() + p.z() * p.z());
    if (norm == 0.0) continue;  // no direction: removed
    const double theta = std::atan2(p.y(), p.x());
    double ratio = p.z() / norm;
    if (ratio > 1.0) ratio = 1.0;
    if (ratio < -1.0) ratio = -1.0;
    const double phi = std::asin(ratio);
    keep[i] = (std::abs(theta) <= theta_max && std::abs(phi) <= phi_max) ? 1 : 0;
  }
  return filter_by_mask(frame, keep);
}

std::vector<Eigen::Vector3d> sample_occlusion_centers(const OcclusionParams& params,
                                                      std::uint64_t seed) {
  std::vector<Eigen::Vector3d> centers;
  centers.reserve(static_cast<std::size_t>(std::max(params.patch_count, 0)));
  RandomStream stream(seed, kCenterStreamKey);
  for (int k = 0; k < params.patch_count; ++k) {
    Eigen::Vector3d direction;
    double norm = 0.0;
    do {
      direction = next_normal3(stream);
      norm = direction.norm();
    } while (norm < 1e-12);
    const double radius =
        params.center_min + (params.center_max - params.center_min) * stream.next_unit();
    centers.push_back(direction * (radius / norm));
  }
  return centers;
}

PointCloudFrame apply_occlusion_at(const PointCloudFrame& frame,
                                   std::span<const Eigen::Vector3d> centers, double radius,
                                   const Exec& exec) {
  if (centers.empty()) return frame;
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  std::vector<std::uint8_t> keep(frame.size(), 1);
  const double radius_sq = radius * radius;
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = frame.positions[i];
    for (const Eigen::Vector3d& c : centers) {
      const double dx = p.x() - c.x();
      const double dy = p.y() - c.y();
      const double dz = p.z() - c.z();
      // retention requires strict ||p - c|| > radius
      if (dx * dx + dy * dy + dz * dz <= radius_sq) {
        keep[i] = 0;
        break;
      }
    }
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_occlusion(const PointCloudFrame& frame, const OcclusionParams& params,
                                std::uint64_t seed, const Exec& exec) {
  if (params.patch_count <= 0) return frame;
  const auto centers = sample_occlusion_centers(params, seed);
  return apply_occlusion_at(frame, centers, params.patch_radius, exec);
}

PointCloudFrame apply_noise(const PointCloudFrame& frame, const NoiseParams& params,
                            std::uint64_t seed, const Exec& exec) {
  const bool outliers_off = params.outlier_prob == 0.0 || params.outlier_sigma == 0.0;
  if (params.sigma == 0.0 && outliers_off) return frame;
  PointCloudFrame out = frame;
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    RandomStream stream(seed, static_cast<std::uint64_t>(i));
    const Eigen::Vector3d eps = next_normal3(stream);
    Eigen::Vector3d displaced = frame.positions[i] + params.sigma * eps;
    if (stream.next_unit() < params.outlier_prob) {
      const Eigen::Vector3d eta = next_normal3(stream);
      displaced += params.outlier_sigma * eta;
    }
    out.positions[i] = displaced;
  }
  return out;
}

Eigen::Matrix3d rotation_from_axis_angle(const Eigen::Vector3d& aa) {
  const double angle = aa.norm();
  Eigen::Matrix3d skew;
  skew << 0.0, -aa.z(), aa.y(),
          aa.z(), 0.0, -aa.x(),
          -aa.y(), aa.x(), 0.0;
  if (angle < kSmallAngleThreshold) {
    return Eigen::Matrix3d::Identity() + skew;
  }
  // Rodrigues: R = I + sin(t)/t [aa]x + (1 - cos(t))/t^2 [aa]x^2
  const double s = std::sin(angle) / angle;
  const double c = (1.0 - std::cos(angle)) / (angle * angle);
  return Eigen::Matrix3d::Identity() + s * skew + c * (skew * skew);
}

PointCloudFrame apply_motion_distortion(const PointCloudFrame& frame, const MotionEstimate& motion,
                                        const Exec& exec) {
  if (motion.linear_velocity.isZero(0.0) && motion.angular_velocity.isZero(0.0)) return frame;
  PointCloudFrame out = frame;
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  const Eigen::Vector3d v = motion.linear_velocity;
  const Eigen::Vector3d w = motion.angular_velocity;
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const double dt = frame.time_offsets[i];
    const Eigen::Vector3d aa = w * dt;
    const Eigen::Vector3d& p = frame.positions[i];
    Eigen::Vector3d rotated;
    if (aa.norm() < kSmallAngleThreshold) {
      rotated = p + aa.cross(p);  // (I + [aa]x) p
    } else {
      rotated = rotation_from_axis_angle(aa) * p;
    }
    out.positions[i] = rotated + v * dt;
  }
  return out;
}

PointCloudFrame apply_sparsification(const PointCloudFrame& frame, int stride, const Exec& exec) {
  if (stride <= 1) return frame;
  const std::int64_t n = static_cast<std::int64_t>(frame.size());
  std::vector<std::uint8_t> keep(frame.size(), 0);
  const int threads = resolve_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    keep[i] = (i % stride == 0) ? 1 : 0;
  }
  return filter_by_mask(frame, keep);
}

}  // namespace scanstress
