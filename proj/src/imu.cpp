#include "scanstress/imu.hpp"

#include <algorithm>

#include "scanstress/errors.hpp"

namespace scanstress {

namespace {

struct Node {
  double t;
  Eigen::Vector3d angular;
  Eigen::Vector3d accel;
};

Node interpolate(const ImuSample& a, const ImuSample& b, double t) {
  const double span = b.timestamp - a.timestamp;
  const double alpha = span > 0.0 ? (t - a.timestamp) / span : 0.0;
  return {t, a.angular_velocity + alpha * (b.angular_velocity - a.angular_velocity),
          a.linear_acceleration + alpha * (b.linear_acceleration - a.linear_acceleration)};
}

// Sample value at time t, linearly interpolated between neighbors.
// Precondition: buffer covers t.
Node sample_at(std::span<const ImuSample> buffer, double t) {
  const auto after = std::lower_bound(
      buffer.begin(), buffer.end(), t,
      [](const ImuSample& s, double value) { return s.timestamp < value; });
  if (after == buffer.begin()) {
    return {t, after->angular_velocity, after->linear_acceleration};
  }
  if (after == buffer.end()) {
    const auto& last = buffer.back();
    return {t, last.angular_velocity, last.linear_acceleration};
  }
  return interpolate(*(after - 1), *after, t);
}

}  // namespace

bool imu_covers(std::span<const ImuSample> buffer, double t0, double t1) {
  return !buffer.empty() && buffer.front().timestamp <= t0 && buffer.back().timestamp >= t1;
}

MotionEstimate estimate_velocity(std::span<const ImuSample> buffer, double t0, double t1,
                                 const Eigen::Vector3d& v0) {
  if (!(t1 > t0)) throw EvalError("estimate_velocity: window end must be after start");
  if (buffer.empty()) throw EvalError("estimate_velocity: empty imu buffer");
  for (std::size_t i = 1; i < buffer.size(); ++i) {
    if (!(buffer[i].timestamp > buffer[i - 1].timestamp))
      throw EvalError("estimate_velocity: imu buffer timestamps not strictly increasing");
  }
  if (!imu_covers(buffer, t0, t1))
    throw EvalError("estimate_velocity: imu buffer does not cover the scan window");

  // Integration nodes: interpolated endpoints plus every sample strictly
  // inside (t0, t1).
  std::vector<Node> nodes;
  nodes.push_back(sample_at(buffer, t0));
  for (const ImuSample& s : buffer) {
    if (s.timestamp > t0 && s.timestamp < t1) {
      nodes.push_back({s.timestamp, s.angular_velocity, s.linear_acceleration});
    }
  }
  nodes.push_back(sample_at(buffer, t1));

  Eigen::Vector3d accel_integral = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_integral = Eigen::Vector3d::Zero();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double dt = nodes[i].t - nodes[i - 1].t;
    accel_integral += 0.5 * dt * (nodes[i].accel + nodes[i - 1].accel);
    angular_integral += 0.5 * dt * (nodes[i].angular + nodes[i - 1].angular);
  }

  MotionEstimate estimate;
  estimate.linear_velocity = v0 + accel_integral;
  estimate.angular_velocity = angular_integral / (t1 - t0);
  return estimate;
}

}  // namespace scanstress
