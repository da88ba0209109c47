#include "scanstress/eval/icp.hpp"

#include <cmath>

#include "scanstress/errors.hpp"
#include "scanstress/eval/kdtree.hpp"

namespace scanstress {

RigidTransform icp_register(const PointCloudFrame& source, const PointCloudFrame& target,
                            const RigidTransform& init, const IcpOptions& options) {
  if (source.empty() || target.empty()) {
    throw EvalError("icp_register: empty source or target frame");
  }

  std::optional<KdTree3> tree;
  if (!options.correspondence_override) tree.emplace(target.positions);

  RigidTransform transform = init;
  double previous_residual = std::numeric_limits<double>::infinity();
  const double gate_sq =
      options.max_correspondence_distance * options.max_correspondence_distance;

  std::vector<Eigen::Vector3d> matched_target;
  std::vector<Eigen::Vector3d> matched_source;
  std::vector<Eigen::Vector3d> moved_positions(source.positions.size());
  std::vector<std::size_t> match_of(source.positions.size());
  std::vector<double> match_d2(source.positions.size());

  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    matched_target.clear();
    matched_source.clear();

    for (std::size_t i = 0; i < source.positions.size(); ++i) {
      const Eigen::Vector3d moved = transform.apply(source.positions[i]);
      moved_positions[i] = moved;
      std::size_t match = KdTree3::kNone;
      double d2 = 0.0;
      if (options.correspondence_override) {
        match = options.correspondence_override(i);
        if (match != KdTree3::kNone) {
          d2 = (target.positions[match] - moved).squaredNorm();
          if (d2 > gate_sq) match = KdTree3::kNone;
        }
      } else {
        const auto hit = tree->nearest(moved, gate_sq);
        match = hit.index;
        d2 = hit.squared_distance;
      }
      match_of[i] = match;
      match_d2[i] = d2;
    }

    if (options.mutual_correspondences && !options.correspondence_override) {
      // Reciprocity check: drop source points that are not their target
      // match's own nearest moved-source point.
      const KdTree3 moved_tree(moved_positions);
      for (std::size_t i = 0; i < source.positions.size(); ++i) {
        if (match_of[i] == KdTree3::kNone) continue;
        const auto back = moved_tree.nearest(target.positions[match_of[i]], gate_sq);
        if (back.index != i) match_of[i] = KdTree3::kNone;
      }
    }

    double residual_sum = 0.0;
    for (std::size_t i = 0; i < source.positions.size(); ++i) {
      if (match_of[i] == KdTree3::kNone) continue;
      matched_target.push_back(target.positions[match_of[i]]);
      matched_source.push_back(source.positions[i]);
      residual_sum += std::sqrt(match_d2[i]);
    }

    if (matched_source.size() < std::max<std::size_t>(options.min_correspondences, 3)) {
      throw EvalError("icp_register: only " + std::to_string(matched_source.size()) +
                      " correspondences within the gate");
    }

    transform = umeyama_align(matched_target, matched_source, false);

    const double mean_residual = residual_sum / static_cast<double>(matched_source.size());
    if (std::fabs(previous_residual - mean_residual) < options.tolerance) break;
    previous_residual = mean_residual;
  }
  return transform;
}

OdometryResult run_odometry(std::span<const PointCloudFrame> scans, const IcpOptions& options) {
  if (scans.size() < 2) throw EvalError("run_odometry: need at least 2 scans");

  OdometryResult result;
  Pose pose;
  pose.timestamp = scans[0].base_time;
  result.trajectory.poses.push_back(pose);

  RigidTransform accumulated;  // sensor k -> world
  for (std::size_t k = 1; k < scans.size(); ++k) {
    RigidTransform relative;
    try {
      relative = icp_register(scans[k], scans[k - 1], RigidTransform{}, options);
    } catch (const EvalError& e) {
      result.failed_at = k;
      result.failure_reason = e.what();
      break;
    }
    accumulated = accumulated.compose(relative);
    Pose current;
    current.timestamp = scans[k].base_time;
    current.rotation = Eigen::Quaterniond(accumulated.rotation);
    current.translation = accumulated.translation;
    result.trajectory.poses.push_back(current);
  }
  return result;
}

}  // namespace scanstress
