#include "scanstress/params.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "scanstress/errors.hpp"

namespace scanstress {

namespace {

[[noreturn]] void fail_range(const std::string& field, const std::string& requirement,
                             double value) {
  std::ostringstream message;
  message << "parameter '" << field << "' out of range: " << value << " (" << requirement << ")";
  throw ConfigError(message.str());
}

void check_finite3(const std::string& field, const Eigen::Vector3d& v) {
  if (!v.allFinite()) throw ConfigError("parameter '" + field + "' has non-finite components");
}

}  // namespace

const DegradationParams& validate_params(const DegradationParams& p) {
  if (!(p.dropout_ratio >= 0.0 && p.dropout_ratio <= 1.0))
    fail_range("dropout_ratio", "expected [0,1]", p.dropout_ratio);
  if (p.structured_sector) {
    const auto& sector = *p.structured_sector;
    if (!std::isfinite(sector.azimuth_start))
      fail_range("structured_sector.azimuth_start", "expected finite", sector.azimuth_start);
    if (!(sector.azimuth_extent > 0.0 && sector.azimuth_extent < 2.0 * M_PI))
      fail_range("structured_sector.azimuth_extent", "expected (0, 2*pi)", sector.azimuth_extent);
  }
  if (!(p.fov.theta_max > 0.0 && p.fov.theta_max <= M_PI))
    fail_range("fov.theta_max", "expected (0, pi]", p.fov.theta_max);
  if (!(p.fov.phi_max > 0.0 && p.fov.phi_max <= M_PI / 2.0))
    fail_range("fov.phi_max", "expected (0, pi/2]", p.fov.phi_max);
  if (p.occlusion.patch_count < 0)
    fail_range("occlusion.patch_count", "expected >= 0", p.occlusion.patch_count);
  if (!(p.occlusion.patch_radius >= 0.0))
    fail_range("occlusion.patch_radius", "expected >= 0", p.occlusion.patch_radius);
  if (!(p.occlusion.center_min >= 0.0))
    fail_range("occlusion.center_min", "expected >= 0", p.occlusion.center_min);
  if (!(p.occlusion.center_max > p.occlusion.center_min))
    fail_range("occlusion.center_max", "expected > center_min", p.occlusion.center_max);
  if (!(p.noise.sigma >= 0.0)) fail_range("noise.sigma", "expected >= 0", p.noise.sigma);
  if (!(p.noise.outlier_prob >= 0.0 && p.noise.outlier_prob <= 1.0))
    fail_range("noise.outlier_prob", "expected [0,1]", p.noise.outlier_prob);
  if (!(p.noise.outlier_sigma >= 0.0))
    fail_range("noise.outlier_sigma", "expected >= 0", p.noise.outlier_sigma);
  if (p.sparsify_stride < 1)
    fail_range("sparsify_stride", "expected >= 1", p.sparsify_stride);
  check_finite3("motion.linear_velocity", p.motion.linear_velocity);
  check_finite3("motion.angular_velocity", p.motion.angular_velocity);
  return p;
}

const char* tier_name(Tier tier) {
  switch (tier) {
    case Tier::kLight: return "light";
    case Tier::kModerate: return "moderate";
    case Tier::kHeavy: return "heavy";
    case Tier::kExtreme: return "extreme";
  }
  return "?";
}

Tier tier_from_name(const std::string& name) {
  for (Tier tier : kAllTiers) {
    if (name == tier_name(tier)) return tier;
  }
  throw ConfigError("unknown severity tier '" + name +
                    "' (expected light, moderate, heavy, or extreme)");
}

const char* module_name(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::kFovReduction: return "fov_reduction";
    case ModuleKind::kOcclusion: return "occlusion";
    case ModuleKind::kStructuredDropout: return "structured_dropout";
    case ModuleKind::kDropout: return "dropout";
    case ModuleKind::kSparsification: return "sparsification";
    case ModuleKind::kNoise: return "noise";
    case ModuleKind::kMotionDistortion: return "motion_distortion";
  }
  return "?";
}

ModuleKind module_from_name(const std::string& name) {
  static const ModuleKind kinds[] = {
      ModuleKind::kFovReduction,  ModuleKind::kOcclusion, ModuleKind::kStructuredDropout,
      ModuleKind::kDropout,       ModuleKind::kSparsification,
      ModuleKind::kNoise,         ModuleKind::kMotionDistortion,
  };
  for (ModuleKind kind : kinds) {
    if (name == module_name(kind)) return kind;
  }
  throw ConfigError("unknown module '" + name + "' in pipeline order");
}

std::vector<ModuleKind> default_module_chain() {
  return {ModuleKind::kFovReduction,   ModuleKind::kOcclusion,
          ModuleKind::kStructuredDropout, ModuleKind::kDropout,
          ModuleKind::kSparsification, ModuleKind::kNoise,
          ModuleKind::kMotionDistortion};
}

FovParams fov_from_shrink(double azimuth_shrink_deg, double elevation_shrink_deg) {
  const double deg = M_PI / 180.0;
  FovParams fov;
  fov.theta_max = M_PI - 0.5 * azimuth_shrink_deg * deg;
  fov.phi_max = M_PI / 2.0 - 0.5 * elevation_shrink_deg * deg;
  return fov;
}

DegradationParams default_tier_params(Tier tier) {
  const int level = static_cast<int>(tier);  // 0..3

  DegradationParams p;
  static constexpr double kDropout[] = {0.15, 0.225, 0.325, 0.40};
  static constexpr double kSigma[] = {0.01, 0.02, 0.035, 0.05};
  static constexpr double kOutlierProb[] = {0.002, 0.005, 0.01, 0.02};
  static constexpr double kOutlierSigma[] = {0.10, 0.20, 0.35, 0.50};
  static constexpr double kAzimuthShrinkDeg[] = {10.0, 20.0, 30.0, 40.0};
  static constexpr int kPatchCount[] = {1, 2, 4, 6};
  static constexpr double kPatchRadius[] = {0.3, 0.5, 0.8, 1.2};
  static constexpr int kStride[] = {1, 2, 3, 4};
  static constexpr double kSpeed[] = {0.5, 1.0, 1.5, 2.0};
  static constexpr double kYawRate[] = {0.125, 0.25, 0.375, 0.5};

  p.dropout_ratio = kDropout[level];
  p.noise = {kSigma[level], kOutlierProb[level], kOutlierSigma[level]};
  p.fov = fov_from_shrink(kAzimuthShrinkDeg[level], 0.5 * kAzimuthShrinkDeg[level]);
  p.occlusion.patch_count = kPatchCount[level];
  p.occlusion.patch_radius = kPatchRadius[level];
  p.occlusion.center_min = 1.0;
  p.occlusion.center_max = 15.0;
  p.sparsify_stride = kStride[level];
  p.motion.linear_velocity = Eigen::Vector3d(kSpeed[level], 0.0, 0.0);
  p.motion.angular_velocity = Eigen::Vector3d(0.0, 0.0, kYawRate[level]);
  p.motion.use_imu = false;
  return p;
}

ScenarioConfig default_scenario() {
  ScenarioConfig config;
  for (Tier tier : kAllTiers) config.tiers[tier] = default_tier_params(tier);
  config.module_chain = default_module_chain();
  config.global_seed = 0;
  return config;
}

const ScenarioConfig& validate_scenario(const ScenarioConfig& config) {
  for (Tier tier : kAllTiers) {
    auto it = config.tiers.find(tier);
    if (it == config.tiers.end())
      throw ConfigError(std::string("missing severity tier '") + tier_name(tier) + "'");
    try {
      validate_params(it->second);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("tier '") + tier_name(tier) + "': " + e.what());
    }
  }
  std::set<ModuleKind> seen;
  for (ModuleKind kind : config.module_chain) {
    if (!seen.insert(kind).second)
      throw ConfigError(std::string("duplicate module '") + module_name(kind) +
                        "' in pipeline order");
  }
  return config;
}

}  // namespace scanstress
