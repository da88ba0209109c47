#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "scanstress/frame.hpp"
#include "scanstress/params.hpp"

namespace scanstress::reference {

// Single-threaded reference implementations of every degradation, kept as
// the test oracle for the OpenMP kernels and as the baseline side of the
// kernel benchmark. The selection predicates below are written straight
// from the defining inequalities with their own membership logic; the
// stochastic ops share only the seed/stream protocol (they must, or seeded
// outputs could not be compared at all).

bool fov_keeps(const Eigen::Vector3d& p, double theta_max, double phi_max);
bool sector_removes(const Eigen::Vector3d& p, const SectorParams& sector);
bool occlusion_removes(const Eigen::Vector3d& p, std::span<const Eigen::Vector3d> centers,
                       double radius);
bool sparsify_keeps(std::size_t index, int stride);

PointCloudFrame apply_dropout(const PointCloudFrame& frame, double ratio, std::uint64_t seed);
PointCloudFrame apply_structured_dropout(const PointCloudFrame& frame, const SectorParams& sector);
PointCloudFrame apply_fov_reduction(const PointCloudFrame& frame, double theta_max,
                                    double phi_max);
PointCloudFrame apply_occlusion_at(const PointCloudFrame& frame,
                                   std::span<const Eigen::Vector3d> centers, double radius);
PointCloudFrame apply_occlusion(const PointCloudFrame& frame, const OcclusionParams& params,
                                std::uint64_t seed);
PointCloudFrame apply_noise(const PointCloudFrame& frame, const NoiseParams& params,
                            std::uint64_t seed);
PointCloudFrame apply_motion_distortion(const PointCloudFrame& frame,
                                        const MotionEstimate& motion);
PointCloudFrame apply_sparsification(const PointCloudFrame& frame, int stride);

// Serial re-application of a whole chain with the same derived seeds as
// the production pipeline (no stats, no IMU source; motion uses the
// configured constants).
PointCloudFrame apply_chain(const PointCloudFrame& frame, const ScenarioConfig& config,
                            Tier tier);

}  // namespace scanstress::reference
