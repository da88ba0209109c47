#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace scanstress {

struct Pose {
  double timestamp = 0.0;  // seconds
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

// Ordered pose sequence; timestamps strictly increasing.
struct Trajectory {
  std::vector<Pose> poses;

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }
  // Throws EvalError unless nonempty with strictly increasing timestamps.
  void validate() const;
};

// TUM-style text: one pose per line, "timestamp tx ty tz qx qy qz qw".
// Lines starting with '#' and blank lines are skipped. Quaternions are
// normalized on read; a badly non-unit quaternion is a parse error.
Trajectory read_tum_trajectory(std::istream& in, const std::string& origin = "<stream>");
Trajectory read_tum_trajectory_file(const std::string& path);
void write_tum_trajectory(const Trajectory& trajectory, std::ostream& out);
void write_tum_trajectory_file(const Trajectory& trajectory, const std::string& path);

}  // namespace scanstress
