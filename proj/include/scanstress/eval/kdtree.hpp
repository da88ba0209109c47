#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace scanstress {

// Static 3D kd-tree over a point array. Median-split build, branch-and-
// bound nearest-neighbor query. Indices refer to the input span.
class KdTree3 {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  explicit KdTree3(std::span<const Eigen::Vector3d> points);

  std::size_t size() const { return points_.size(); }

  struct Hit {
    std::size_t index = kNone;
    double squared_distance = std::numeric_limits<double>::infinity();
  };

  // Nearest point to the query; max_squared caps the search radius
  // (returns kNone when nothing is closer).
  Hit nearest(const Eigen::Vector3d& query,
              double max_squared = std::numeric_limits<double>::infinity()) const;

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t axis = 0;
    std::uint32_t begin = 0, end = 0;  // leaf range in order_
    std::int32_t left = -1, right = -1;
  };

  void build(std::uint32_t begin, std::uint32_t end, std::int32_t node_index);
  void search(std::int32_t node_index, const Eigen::Vector3d& query, Hit& best) const;

  std::span<const Eigen::Vector3d> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace scanstress
