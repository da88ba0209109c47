#pragma once

#include <vector>

#include "scanstress/frame.hpp"
#include "scanstress/kernels.hpp"
#include "scanstress/params.hpp"

namespace scanstress {

struct ChainResult {
  PointCloudFrame frame;
  FrameStats stats;
};

// Subset gate for the optional randomized-chain mode. Deterministic in
// (global_seed, frame_index, ordinal); always true when the mode is off.
bool module_included(const ScenarioConfig& config, std::uint64_t frame_index,
                     std::size_t ordinal);

// Velocity source resolution for motion distortion: IMU integration over
// the scan window when requested and covered, configured constants
// otherwise (v0 = 0 for the integration).
MotionEstimate resolve_motion(const MotionParams& params, const PointCloudFrame& frame,
                              const std::vector<ImuSample>* imu);

// Applies config.module_chain in order on one frame. Module ordinal k uses
// seed derive_seed(global_seed, frame.frame_index, k), so outputs are
// byte-identical across runs and worker schedules. Records per-module wall
// time and input/output counts.
ChainResult apply_chain(const PointCloudFrame& frame, const ScenarioConfig& config, Tier tier,
                        const std::vector<ImuSample>* imu = nullptr, const Exec& exec = {});

}  // namespace scanstress
