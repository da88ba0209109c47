#include "scanstress/chain.hpp"

#include <chrono>

#include "scanstress/errors.hpp"
#include "scanstress/imu.hpp"
#include "scanstress/rng.hpp"

namespace scanstress {

namespace {

// Reserved ordinal feeding the subset gate; chain ordinals stay far below.
constexpr std::uint64_t kSubsetGateOrdinal = 0xFFFF'FFFFull;

PointCloudFrame dispatch_module(ModuleKind kind, const PointCloudFrame& frame,
                                const DegradationParams& params, std::uint64_t seed,
                                const PointCloudFrame& original,
                                const std::vector<ImuSample>* imu, const Exec& exec) {
  switch (kind) {
    case ModuleKind::kFovReduction:
      return apply_fov_reduction(frame, params.fov.theta_max, params.fov.phi_max, exec);
    case ModuleKind::kOcclusion:
      return apply_occlusion(frame, params.occlusion, seed, exec);
    case ModuleKind::kStructuredDropout:
      if (!params.structured_sector) return frame;
      return apply_structured_dropout(frame, *params.structured_sector, exec);
    case ModuleKind::kDropout:
      return apply_dropout(frame, params.dropout_ratio, seed, exec);
    case ModuleKind::kSparsification:
      return apply_sparsification(frame, params.sparsify_stride, exec);
    case ModuleKind::kNoise:
      return apply_noise(frame, params.noise, seed, exec);
    case ModuleKind::kMotionDistortion:
      return apply_motion_distortion(frame, resolve_motion(params.motion, original, imu), exec);
  }
  throw ConfigError("unhandled module kind");
}

}  // namespace

bool module_included(const ScenarioConfig& config, std::uint64_t frame_index,
                     std::size_t ordinal) {
  if (!config.randomize_subset) return true;
  RandomStream gate(derive_seed(config.global_seed, frame_index, kSubsetGateOrdinal),
                    static_cast<std::uint64_t>(ordinal));
  return gate.next_unit() < 0.5;
}

MotionEstimate resolve_motion(const MotionParams& params, const PointCloudFrame& frame,
                              const std::vector<ImuSample>* imu) {
  if (params.use_imu && imu != nullptr && !frame.time_offsets.empty()) {
    const double t0 = frame.base_time;
    const double t1 = frame.base_time + frame.time_offsets.back();
    if (t1 > t0 && imu_covers(*imu, t0, t1)) {
      return estimate_velocity(*imu, t0, t1, Eigen::Vector3d::Zero());
    }
  }
  return {params.linear_velocity, params.angular_velocity};
}

ChainResult apply_chain(const PointCloudFrame& frame, const ScenarioConfig& config, Tier tier,
                        const std::vector<ImuSample>* imu, const Exec& exec) {
  const auto tier_it = config.tiers.find(tier);
  if (tier_it == config.tiers.end())
    throw ConfigError(std::string("tier '") + tier_name(tier) + "' not present in scenario");
  const DegradationParams& params = validate_params(tier_it->second);

  ChainResult result;
  result.stats.frame_index = frame.frame_index;
  result.stats.sensor_id = frame.sensor_id;
  result.stats.input_count = frame.size();
  result.stats.ingestion_dropped = frame.ingestion_dropped;

  PointCloudFrame current = frame;
  for (std::size_t ordinal = 0; ordinal < config.module_chain.size(); ++ordinal) {
    if (!module_included(config, frame.frame_index, ordinal)) continue;
    const ModuleKind kind = config.module_chain[ordinal];
    const std::uint64_t seed = derive_seed(config.global_seed, frame.frame_index, ordinal);
    const auto start = std::chrono::steady_clock::now();
    current = dispatch_module(kind, current, params, seed, frame, imu, exec);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.stats.module_seconds.emplace_back(module_name(kind), elapsed.count());
  }

  result.stats.output_count = current.size();
  result.stats.reduction_ratio =
      result.stats.input_count == 0
          ? 0.0
          : 1.0 - static_cast<double>(result.stats.output_count) /
                      static_cast<double>(result.stats.input_count);
  result.frame = std::move(current);
  return result;
}

}  // namespace scanstress
