#include "scanstress/reference.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "scanstress/chain.hpp"
#include "scanstress/errors.hpp"
#include "scanstress/rng.hpp"

namespace scanstress::reference {

namespace {

// Angle folded into [0, 2*pi).
double wrap_positive(double angle) {
  double a = std::fmod(angle, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  return a;
}

}  // namespace

bool fov_keeps(const Eigen::Vector3d& p, double theta_max, double phi_max) {
  const double norm = std::sqrt(p.x() * p.x() + p.y() * p.y() + p.z() * p.z());
  if (norm == 0.0) return false;
  const double theta = std::atan2(p.y(), p.x());
  if (!(std::fabs(theta) <= theta_max)) return false;
  double ratio = p.z() / norm;
  if (ratio > 1.0) ratio = 1.0;
  if (ratio < -1.0) ratio = -1.0;
  const double phi = std::asin(ratio);
  return std::fabs(phi) <= phi_max;
}

bool sector_removes(const Eigen::Vector3d& p, const SectorParams& sector) {
  const double theta = wrap_positive(std::atan2(p.y(), p.x()));
  const double lo = wrap_positive(sector.azimuth_start);
  const double hi = lo + sector.azimuth_extent;  // may exceed 2*pi
  if (theta >= lo && theta < hi) return true;
  const double shifted = theta + 2.0 * M_PI;
  return shifted >= lo && shifted < hi;
}

bool occlusion_removes(const Eigen::Vector3d& p, std::span<const Eigen::Vector3d> centers,
                       double radius) {
  for (const Eigen::Vector3d& c : centers) {
    const double dx = p.x() - c.x();
    const double dy = p.y() - c.y();
    const double dz = p.z() - c.z();
    const double distance = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (!(distance > radius)) return true;
  }
  return false;
}

bool sparsify_keeps(std::size_t index, int stride) {
  return index % static_cast<std::size_t>(stride) == 0;
}

PointCloudFrame apply_dropout(const PointCloudFrame& frame, double ratio, std::uint64_t seed) {
  if (ratio <= 0.0) return frame;
  std::vector<std::uint8_t> keep(frame.size(), 0);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    RandomStream stream(seed, i);
    keep[i] = stream.next_unit() < 1.0 - ratio ? 1 : 0;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_structured_dropout(const PointCloudFrame& frame,
                                         const SectorParams& sector) {
  std::vector<std::uint8_t> keep(frame.size(), 1);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (sector_removes(frame.positions[i], sector)) keep[i] = 0;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_fov_reduction(const PointCloudFrame& frame, double theta_max,
                                    double phi_max) {
  std::vector<std::uint8_t> keep(frame.size(), 0);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    keep[i] = fov_keeps(frame.positions[i], theta_max, phi_max) ? 1 : 0;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_occlusion_at(const PointCloudFrame& frame,
                                   std::span<const Eigen::Vector3d> centers, double radius) {
  if (centers.empty()) return frame;
  std::vector<std::uint8_t> keep(frame.size(), 1);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (occlusion_removes(frame.positions[i], centers, radius)) keep[i] = 0;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_occlusion(const PointCloudFrame& frame, const OcclusionParams& params,
                                std::uint64_t seed) {
  if (params.patch_count <= 0) return frame;
  const auto centers = sample_occlusion_centers(params, seed);
  return reference::apply_occlusion_at(frame, centers, params.patch_radius);
}

PointCloudFrame apply_noise(const PointCloudFrame& frame, const NoiseParams& params,
                            std::uint64_t seed) {
  const bool outliers_off = params.outlier_prob == 0.0 || params.outlier_sigma == 0.0;
  if (params.sigma == 0.0 && outliers_off) return frame;
  PointCloudFrame out = frame;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    RandomStream stream(seed, i);
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

PointCloudFrame apply_motion_distortion(const PointCloudFrame& frame,
                                        const MotionEstimate& motion) {
  if (motion.linear_velocity.isZero(0.0) && motion.angular_velocity.isZero(0.0)) return frame;
  PointCloudFrame out = frame;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double dt = frame.time_offsets[i];
    const Eigen::Vector3d aa = motion.angular_velocity * dt;
    const Eigen::Vector3d& p = frame.positions[i];
    const double angle = std::sqrt(aa.x() * aa.x() + aa.y() * aa.y() + aa.z() * aa.z());
    Eigen::Vector3d rotated;
    if (angle < kSmallAngleThreshold) {
      rotated = Eigen::Vector3d(p.x() + (aa.y() * p.z() - aa.z() * p.y()),
                                p.y() + (aa.z() * p.x() - aa.x() * p.z()),
                                p.z() + (aa.x() * p.y() - aa.y() * p.x()));
    } else {
      const Eigen::Vector3d axis = aa / angle;
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      // Rodrigues in vector form: p c + (axis x p) s + axis (axis . p)(1 - c)
      rotated = p * c + axis.cross(p) * s + axis * (axis.dot(p) * (1.0 - c));
    }
    out.positions[i] = rotated + motion.linear_velocity * dt;
  }
  return out;
}

PointCloudFrame apply_sparsification(const PointCloudFrame& frame, int stride) {
  if (stride <= 1) return frame;
  std::vector<std::uint8_t> keep(frame.size(), 0);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    keep[i] = sparsify_keeps(i, stride) ? 1 : 0;
  }
  return filter_by_mask(frame, keep);
}

PointCloudFrame apply_chain(const PointCloudFrame& frame, const ScenarioConfig& config,
                            Tier tier) {
  const auto tier_it = config.tiers.find(tier);
  if (tier_it == config.tiers.end())
    throw ConfigError(std::string("tier '") + tier_name(tier) + "' not present in scenario");
  const DegradationParams& params = tier_it->second;

  PointCloudFrame current = frame;
  for (std::size_t ordinal = 0; ordinal < config.module_chain.size(); ++ordinal) {
    if (!module_included(config, frame.frame_index, ordinal)) continue;
    const std::uint64_t seed = derive_seed(config.global_seed, frame.frame_index, ordinal);
    switch (config.module_chain[ordinal]) {
      case ModuleKind::kFovReduction:
        current = reference::apply_fov_reduction(current, params.fov.theta_max, params.fov.phi_max);
        break;
      case ModuleKind::kOcclusion:
        current = reference::apply_occlusion(current, params.occlusion, seed);
        break;
      case ModuleKind::kStructuredDropout:
        if (params.structured_sector)
          current = reference::apply_structured_dropout(current, *params.structured_sector);
        break;
      case ModuleKind::kDropout:
        current = reference::apply_dropout(current, params.dropout_ratio, seed);
        break;
      case ModuleKind::kSparsification:
        current = reference::apply_sparsification(current, params.sparsify_stride);
        break;
      case ModuleKind::kNoise:
        current = reference::apply_noise(current, params.noise, seed);
        break;
      case ModuleKind::kMotionDistortion:
        current = reference::apply_motion_distortion(
            current, {params.motion.linear_velocity, params.motion.angular_velocity});
        break;
    }
  }
  return current;
}

}  // namespace scanstress::reference
