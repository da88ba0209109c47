#include "scanstress/eval/sweep.hpp"

#include <cmath>

#include "scanstress/chain.hpp"
#include "scanstress/errors.hpp"
#include "scanstress/rng.hpp"

namespace scanstress {

Trajectory ground_truth_trajectory(const TrajectorySpec& spec) {
  Trajectory trajectory;
  const double period = 1.0 / spec.rate_hz;
  for (int k = 0; k < spec.frame_count; ++k) {
    Pose pose;
    pose.timestamp = k * period;
    pose.translation = spec.start + Eigen::Vector3d(spec.step * k, 0.0, 0.0);
    pose.rotation =
        Eigen::Quaterniond(Eigen::AngleAxisd(spec.yaw_step * k, Eigen::Vector3d::UnitZ()));
    trajectory.poses.push_back(pose);
  }
  return trajectory;
}

Trajectory relative_to_first(const Trajectory& trajectory) {
  Trajectory out;
  if (trajectory.empty()) return out;
  const Pose& origin = trajectory.poses.front();
  const Eigen::Quaterniond inv_rotation = origin.rotation.conjugate();
  for (const Pose& pose : trajectory.poses) {
    Pose relative;
    relative.timestamp = pose.timestamp;
    relative.rotation = inv_rotation * pose.rotation;
    relative.translation = inv_rotation * (pose.translation - origin.translation);
    out.poses.push_back(relative);
  }
  return out;
}

std::vector<PointCloudFrame> render_sequence(const Scene& scene, const TrajectorySpec& spec,
                                             const SensorProfile& profile,
                                             const RenderOptions& render) {
  const Trajectory truth = ground_truth_trajectory(spec);
  std::vector<PointCloudFrame> scans;
  scans.reserve(truth.size());
  for (std::size_t k = 0; k < truth.poses.size(); ++k) {
    RenderOptions per_frame = render;
    per_frame.ray_jitter = render.ray_jitter > 0.0 ? render.ray_jitter : 1.0;
    per_frame.ray_jitter_seed = derive_seed(0x9C4A, k, 0);
    PointCloudFrame frame = render_scan(scene, truth.poses[k], profile, spec.rate_hz, per_frame);
    frame.frame_index = k;
    scans.push_back(std::move(frame));
  }
  return scans;
}

namespace {

// One (tier, repeat) evaluation. Errors are reported, never thrown.
struct CellOutcome {
  std::vector<double> errors;
  bool failed = false;
  std::string reason;
};

CellOutcome evaluate_cell(const std::vector<PointCloudFrame>& clean_scans,
                          const Trajectory& truth, const ScenarioConfig& config, Tier tier,
                          std::uint64_t cell_seed, const SweepOptions& options) {
  CellOutcome outcome;
  ScenarioConfig cell_config = config;
  cell_config.global_seed = cell_seed;

  std::vector<PointCloudFrame> degraded;
  degraded.reserve(clean_scans.size());
  try {
    for (const PointCloudFrame& scan : clean_scans) {
      degraded.push_back(apply_chain(scan, cell_config, tier, nullptr, options.exec).frame);
    }
    const OdometryResult odometry = run_odometry(degraded, options.icp);
    if (odometry.trajectory.size() < 2) {
      outcome.failed = true;
      outcome.reason = odometry.failure_reason.empty() ? "trajectory too short"
                                                       : odometry.failure_reason;
      return outcome;
    }
    ApeOptions ape_options;
    ape_options.align = false;
    ape_options.max_dt = 0.5 / options.trajectory.rate_hz;
    const auto pairs = associate(truth, odometry.trajectory, ape_options.max_dt);
    for (const PosePair& pair : pairs) {
      outcome.errors.push_back((truth.poses[pair.ref_index].translation -
                                odometry.trajectory.poses[pair.est_index].translation)
                                   .norm());
    }
    if (odometry.failed_at) {
      outcome.failed = true;
      outcome.reason = "odometry truncated at frame " + std::to_string(*odometry.failed_at) +
                       ": " + odometry.failure_reason;
    }
  } catch (const Error& e) {
    outcome.failed = true;
    outcome.reason = e.what();
  }
  return outcome;
}

}  // namespace

SweepResult severity_sweep(std::uint64_t scene_seed, const ScenarioConfig& config,
                           std::span<const Tier> tiers, int repeats,
                           const SweepOptions& options) {
  if (repeats < 1) throw EvalError("severity_sweep: repeats must be >= 1");
  validate_scenario(config);

  const Scene scene = generate_scene(scene_seed);
  const Trajectory truth = relative_to_first(ground_truth_trajectory(options.trajectory));
  const std::vector<PointCloudFrame> clean_scans =
      render_sequence(scene, options.trajectory, options.profile, options.render);

  SweepResult result;

  {
    const OdometryResult clean = run_odometry(clean_scans, options.icp);
    std::vector<double> errors;
    const auto pairs = associate(truth, clean.trajectory, 0.5 / options.trajectory.rate_hz);
    for (const PosePair& pair : pairs) {
      errors.push_back((truth.poses[pair.ref_index].translation -
                        clean.trajectory.poses[pair.est_index].translation)
                           .norm());
    }
    result.clean_baseline = ape_statistics(errors);
  }

  result.cells.reserve(tiers.size());
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    SweepCell cell;
    cell.tier = tiers[t];
    cell.repeats = repeats;

    std::vector<CellOutcome> outcomes(static_cast<std::size_t>(repeats));
    const std::uint64_t tier_key = static_cast<std::uint64_t>(cell.tier);
#pragma omp parallel for schedule(dynamic) if (repeats > 1)
    for (int r = 0; r < repeats; ++r) {
      const std::uint64_t cell_seed = derive_seed(config.global_seed, tier_key, r);
      outcomes[r] = evaluate_cell(clean_scans, truth, config, cell.tier, cell_seed, options);
    }

    std::vector<double> pooled;
    for (const CellOutcome& outcome : outcomes) {
      if (outcome.failed) {
        ++cell.failures;
        cell.failure_reasons.push_back(outcome.reason);
      }
      pooled.insert(pooled.end(), outcome.errors.begin(), outcome.errors.end());
    }
    if (!pooled.empty()) cell.ape = ape_statistics(pooled);
    result.cells.push_back(std::move(cell));
  }
  return result;
}

}  // namespace scanstress
