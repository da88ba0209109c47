#include "scanstress/eval/ape.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "scanstress/errors.hpp"

namespace scanstress {

std::vector<PosePair> associate(const Trajectory& ref, const Trajectory& est, double max_dt) {
  if (!(max_dt > 0.0)) throw EvalError("associate: max_dt must be positive");
  ref.validate();
  est.validate();

  std::vector<PosePair> pairs;
  for (std::size_t e = 0; e < est.poses.size(); ++e) {
    const double t = est.poses[e].timestamp;
    const auto after = std::lower_bound(
        ref.poses.begin(), ref.poses.end(), t,
        [](const Pose& pose, double value) { return pose.timestamp < value; });
    std::size_t best = ref.poses.size();
    double best_dt = max_dt;
    if (after != ref.poses.end()) {
      const double dt = std::fabs(after->timestamp - t);
      if (dt <= best_dt) {
        best = static_cast<std::size_t>(after - ref.poses.begin());
        best_dt = dt;
      }
    }
    if (after != ref.poses.begin()) {
      const auto before = after - 1;
      const double dt = std::fabs(before->timestamp - t);
      if (dt < best_dt || (dt <= best_dt && best == ref.poses.size())) {
        best = static_cast<std::size_t>(before - ref.poses.begin());
        best_dt = dt;
      }
    }
    if (best < ref.poses.size()) {
      pairs.push_back({best, e, t - ref.poses[best].timestamp});
    }
  }
  if (pairs.empty()) {
    throw EvalError("associate: no pose pairs within max_dt = " + std::to_string(max_dt));
  }
  return pairs;
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
  RigidTransform out;
  out.rotation = rotation * inner.rotation;
  out.translation = scale * (rotation * inner.translation) + translation;
  out.scale = scale * inner.scale;
  return out;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform out;
  out.rotation = rotation.transpose();
  out.scale = 1.0 / scale;
  out.translation = -out.scale * (out.rotation * translation);
  return out;
}

RigidTransform umeyama_align(std::span<const Eigen::Vector3d> ref,
                             std::span<const Eigen::Vector3d> est, bool with_scale) {
  if (ref.size() != est.size()) throw EvalError("umeyama_align: size mismatch");
  const std::size_t n = ref.size();
  if (n < 3) throw EvalError("umeyama_align: need at least 3 point pairs");

  Eigen::Vector3d mean_ref = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean_est = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mean_ref += ref[i];
    mean_est += est[i];
  }
  mean_ref /= static_cast<double>(n);
  mean_est /= static_cast<double>(n);

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  double est_variance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d dr = ref[i] - mean_ref;
    const Eigen::Vector3d de = est[i] - mean_est;
    cross += dr * de.transpose();
    est_variance += de.squaredNorm();
  }
  cross /= static_cast<double>(n);
  est_variance /= static_cast<double>(n);

  if (est_variance < 1e-18) throw EvalError("umeyama_align: source points are coincident");

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d singular = svd.singularValues();
  if (singular(1) <= 1e-12 * std::max(singular(0), 1e-300)) {
    throw EvalError("umeyama_align: degenerate (collinear) point configuration");
  }

  Eigen::Vector3d sign_fix = Eigen::Vector3d::Ones();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) sign_fix(2) = -1.0;

  RigidTransform out;
  out.rotation = svd.matrixU() * sign_fix.asDiagonal() * svd.matrixV().transpose();
  out.scale = with_scale ? singular.dot(sign_fix) / est_variance : 1.0;
  out.translation = mean_ref - out.scale * (out.rotation * mean_est);
  return out;
}

ApeResult ape_statistics(std::span<const double> errors) {
  if (errors.empty()) throw EvalError("ape_statistics: no error samples");
  ApeResult result;
  result.count = errors.size();
  const double n = static_cast<double>(errors.size());

  double sum = 0.0;
  double sum_sq = 0.0;
  result.min = errors[0];
  result.max = errors[0];
  for (double e : errors) {
    sum += e;
    sum_sq += e * e;
    result.min = std::min(result.min, e);
    result.max = std::max(result.max, e);
  }
  result.mean = sum / n;
  result.rmse = std::sqrt(sum_sq / n);

  double centered = 0.0;
  for (double e : errors) centered += (e - result.mean) * (e - result.mean);
  result.std_dev = std::sqrt(centered / n);

  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  result.median =
      sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return result;
}

ApeResult compute_ape(const Trajectory& ref, const Trajectory& est, const ApeOptions& options) {
  const auto pairs = associate(ref, est, options.max_dt);

  std::vector<Eigen::Vector3d> ref_points;
  std::vector<Eigen::Vector3d> est_points;
  ref_points.reserve(pairs.size());
  est_points.reserve(pairs.size());
  for (const PosePair& pair : pairs) {
    ref_points.push_back(ref.poses[pair.ref_index].translation);
    est_points.push_back(est.poses[pair.est_index].translation);
  }

  RigidTransform transform;  // identity unless aligning
  if (options.align) {
    transform = umeyama_align(ref_points, est_points, options.with_scale);
  }

  std::vector<double> errors;
  errors.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    errors.push_back((ref_points[i] - transform.apply(est_points[i])).norm());
  }
  return ape_statistics(errors);
}

}  // namespace scanstress
