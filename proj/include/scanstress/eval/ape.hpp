#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "scanstress/eval/trajectory.hpp"

namespace scanstress {

struct PosePair {
  std::size_t ref_index;
  std::size_t est_index;
  double dt;  // est timestamp minus ref timestamp
};

// Nearest-in-time pairing: each estimated pose is matched to the closest
// reference pose within max_dt; unmatched poses are dropped. Pairs come
// back in estimated-time order. Throws EvalError when nothing pairs.
std::vector<PosePair> associate(const Trajectory& ref, const Trajectory& est, double max_dt);

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double scale = 1.0;

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return scale * (rotation * p) + translation;
  }
  RigidTransform compose(const RigidTransform& inner) const;  // this after inner
  RigidTransform inverse() const;
};

// Least-squares rigid (optionally scaled) transform minimizing
// sum ||ref_i - (s R est_i + t)||^2 (Umeyama closed form). Requires at
// least 3 non-collinear pairs; degenerate input throws EvalError.
RigidTransform umeyama_align(std::span<const Eigen::Vector3d> ref,
                             std::span<const Eigen::Vector3d> est, bool with_scale = false);

struct ApeResult {
  double mean = 0.0;
  double std_dev = 0.0;  // population convention (divide by n)
  double rmse = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

// Summary statistics of raw per-pose translation errors.
ApeResult ape_statistics(std::span<const double> errors);

struct ApeOptions {
  bool align = false;       // Umeyama-align est onto ref before the error
  bool with_scale = false;  // only meaningful when align is set
  double max_dt = 0.02;     // association window, seconds
};

// Per-pair error = || translation(ref_i) - translation(est_i') || after
// optional alignment.
ApeResult compute_ape(const Trajectory& ref, const Trajectory& est, const ApeOptions& options = {});

}  // namespace scanstress
