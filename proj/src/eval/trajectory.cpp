#include "scanstress/eval/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scanstress/errors.hpp"

namespace scanstress {

void Trajectory::validate() const {
  if (poses.empty()) throw EvalError("trajectory is empty");
  for (std::size_t i = 1; i < poses.size(); ++i) {
    if (!(poses[i].timestamp > poses[i - 1].timestamp)) {
      throw EvalError("trajectory timestamps not strictly increasing at index " +
                      std::to_string(i));
    }
  }
}

Trajectory read_tum_trajectory(std::istream& in, const std::string& origin) {
  Trajectory trajectory;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(fields >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) {
      throw EvalError(origin + ":" + std::to_string(line_number) +
                      ": expected 'timestamp tx ty tz qx qy qz qw'");
    }
    Eigen::Quaterniond q(qw, qx, qy, qz);
    const double norm = q.norm();
    if (!(std::fabs(norm - 1.0) < 1e-3)) {
      throw EvalError(origin + ":" + std::to_string(line_number) +
                      ": quaternion norm far from 1 (" + std::to_string(norm) + ")");
    }
    q.normalize();
    trajectory.poses.push_back({ts, q, Eigen::Vector3d(tx, ty, tz)});
  }
  trajectory.validate();
  return trajectory;
}

Trajectory read_tum_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory '" + path + "'");
  return read_tum_trajectory(in, path);
}

void write_tum_trajectory(const Trajectory& trajectory, std::ostream& out) {
  char buffer[256];
  for (const Pose& pose : trajectory.poses) {
    std::snprintf(buffer, sizeof buffer,
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", pose.timestamp,
                  pose.translation.x(), pose.translation.y(), pose.translation.z(),
                  pose.rotation.x(), pose.rotation.y(), pose.rotation.z(), pose.rotation.w());
    out << buffer;
  }
  if (!out) throw IoError("trajectory write failed");
}

void write_tum_trajectory_file(const Trajectory& trajectory, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trajectory '" + path + "' for writing");
  write_tum_trajectory(trajectory, out);
}

}  // namespace scanstress
