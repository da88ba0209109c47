#pragma once

#include <span>
#include <string>
#include <vector>

#include "scanstress/eval/icp.hpp"
#include "scanstress/eval/render.hpp"
#include "scanstress/kernels.hpp"
#include "scanstress/params.hpp"

namespace scanstress {

// Straight-corridor ground-truth path through the synthetic room, with an
// optional gentle yaw.
struct TrajectorySpec {
  int frame_count = 10;
  double step = 0.3;        // meters per frame along +x
  double yaw_step = 0.02;   // radians per frame
  double rate_hz = 10.0;
  Eigen::Vector3d start = {-3.2, 0.0, 1.2};
};

Trajectory ground_truth_trajectory(const TrajectorySpec& spec);

// The same trajectory expressed in the frame of its first pose (odometry
// outputs live there: they start at identity).
Trajectory relative_to_first(const Trajectory& trajectory);

// Clean scans rendered along the ground-truth path.
std::vector<PointCloudFrame> render_sequence(const Scene& scene, const TrajectorySpec& spec,
                                             const SensorProfile& profile,
                                             const RenderOptions& render = {});

struct SweepCell {
  Tier tier = Tier::kLight;
  ApeResult ape;              // pooled per-pose errors over all repeats
  int repeats = 0;
  int failures = 0;           // repeats whose odometry/APE failed outright
  std::vector<std::string> failure_reasons;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // one per requested tier, in request order
  ApeResult clean_baseline;      // odometry on the undegraded scans
};

struct SweepOptions {
  TrajectorySpec trajectory;
  SensorProfile profile = make_profile(ProfileClass::kGeneric);
  RenderOptions render;
  IcpOptions icp;
  Exec exec;
};

// Renders clean scans once, then for every (tier, repeat) degrades them
// with a cell seed derived from (global_seed, tier index, repeat), runs
// ICP odometry, and pools per-pose APE against ground truth. Failed cells
// are recorded, not fatal. Deterministic in (scene_seed, config seed).
SweepResult severity_sweep(std::uint64_t scene_seed, const ScenarioConfig& config,
                           std::span<const Tier> tiers, int repeats,
                           const SweepOptions& options = {});

}  // namespace scanstress
