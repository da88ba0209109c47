#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "scanstress/eval/ape.hpp"
#include "scanstress/frame.hpp"

namespace scanstress {

struct IcpOptions {
  int max_iterations = 50;
  double tolerance = 1e-6;  // stop when mean residual changes less than this
  double max_correspondence_distance = 1.0;  // meters
  std::size_t min_correspondences = 10;
  // Keep only mutual nearest-neighbor pairs. Scan overlap is never total
  // (occlusion boundaries move with the sensor); one-sided matches at
  // those boundaries vote for spurious motion, and reciprocity filters
  // them out.
  bool mutual_correspondences = true;
  // Test hook: maps a source index to a target index (or KdTree3::kNone to
  // skip), bypassing nearest-neighbor search entirely.
  std::function<std::size_t(std::size_t)> correspondence_override;
};

// Point-to-point ICP registering source onto target: returns T with
// target ~= T(source). Iterates nearest-neighbor correspondence and
// Umeyama solves until the mean residual stops improving. Throws EvalError
// when fewer than min_correspondences pairs survive gating.
RigidTransform icp_register(const PointCloudFrame& source, const PointCloudFrame& target,
                            const RigidTransform& init, const IcpOptions& options = {});

struct OdometryResult {
  Trajectory trajectory;
  // Set when registration failed: index of the first frame that could not
  // be registered (trajectory is truncated right before it).
  std::optional<std::size_t> failed_at;
  std::string failure_reason;
};

// Frame-to-frame ICP odometry from identity; one pose per scan, stamped
// with the frame base time.
OdometryResult run_odometry(std::span<const PointCloudFrame> scans, const IcpOptions& options = {});

}  // namespace scanstress
