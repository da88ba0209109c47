#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace scanstress {

// Contiguous azimuth band removed by structured dropout. Half-open
// [start, start + extent) with wrap-around at +/- pi.
struct SectorParams {
  double azimuth_start = 0.0;   // radians
  double azimuth_extent = 0.0;  // radians, in (0, 2*pi)
};

// Angular crop: keep |theta| <= theta_max and |phi| <= phi_max (inclusive).
struct FovParams {
  double theta_max = M_PI;       // azimuth half-span, (0, pi]
  double phi_max = M_PI / 2.0;   // elevation half-span, (0, pi/2]
};

// Spherical occlusion patches. Centers are sampled with direction uniform
// on the unit sphere and radius uniform on [center_min, center_max].
struct OcclusionParams {
  int patch_count = 0;        // K >= 0
  double patch_radius = 0.0;  // s, meters
  double center_min = 1.0;    // meters
  double center_max = 15.0;   // meters
};

// Additive Gaussian noise plus Bernoulli-gated outlier displacement.
struct NoiseParams {
  double sigma = 0.0;          // meters
  double outlier_prob = 0.0;   // q in [0, 1]
  double outlier_sigma = 0.0;  // meters
};

// Constant-velocity motion over one scan; when use_imu is set and a
// covering buffer is available, velocities come from IMU integration.
struct MotionParams {
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();   // m/s
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();  // rad/s
  bool use_imu = false;
};

// The full per-tier parameterization.
struct DegradationParams {
  double dropout_ratio = 0.0;  // r in [0, 1]
  std::optional<SectorParams> structured_sector;
  FovParams fov;
  OcclusionParams occlusion;
  NoiseParams noise;
  int sparsify_stride = 1;  // >= 1
  MotionParams motion;
};

// Throws ConfigError naming the offending field when any invariant fails;
// returns the params unchanged otherwise.
const DegradationParams& validate_params(const DegradationParams& params);

enum class Tier : std::uint8_t { kLight = 0, kModerate, kHeavy, kExtreme };

inline constexpr std::array<Tier, 4> kAllTiers = {Tier::kLight, Tier::kModerate, Tier::kHeavy,
                                                  Tier::kExtreme};

const char* tier_name(Tier tier);
Tier tier_from_name(const std::string& name);  // throws ConfigError on unknown names

enum class ModuleKind : std::uint8_t {
  kFovReduction = 0,
  kOcclusion,
  kStructuredDropout,
  kDropout,
  kSparsification,
  kNoise,
  kMotionDistortion,
};

const char* module_name(ModuleKind kind);
ModuleKind module_from_name(const std::string& name);  // throws ConfigError

// Default module order: selection on clean geometry first, perturbations on
// the survivors, motion distortion last since it consumes per-point time
// offsets that selection leaves untouched.
std::vector<ModuleKind> default_module_chain();

struct ScenarioConfig {
  std::map<Tier, DegradationParams> tiers;  // all four tiers present
  std::vector<ModuleKind> module_chain;     // no duplicates
  std::uint64_t global_seed = 0;
  // Optional mode: each frame applies a seeded random subset of the chain
  // instead of the full chain. Off by default.
  bool randomize_subset = false;
};

// Built-in tier table. The light->extreme progression: dropout ratio
// 0.15/0.225/0.325/0.40, noise sigma 0.01/0.02/0.035/0.05 m, azimuth FoV
// shrink 10/20/30/40 deg (elevation shrink half of that), occlusion
// (K, s) = (1,0.3)/(2,0.5)/(4,0.8)/(6,1.2), stride 1/2/3/4, motion up to
// (2 m/s, 0.5 rad/s). All overridable from the scenario file.
DegradationParams default_tier_params(Tier tier);
ScenarioConfig default_scenario();

// Validates every tier's params, tier completeness, and chain uniqueness.
const ScenarioConfig& validate_scenario(const ScenarioConfig& config);

// FoV limits from "span shrink" amounts: the 360 deg azimuth span loses
// azimuth_shrink_deg in total, the 180 deg elevation span loses
// elevation_shrink_deg in total.
FovParams fov_from_shrink(double azimuth_shrink_deg, double elevation_shrink_deg);

}  // namespace scanstress
