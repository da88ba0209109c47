#include "scanstress/eval/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace scanstress {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

KdTree3::KdTree3(std::span<const Eigen::Vector3d> points) : points_(points) {
  order_.resize(points.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 8);
    nodes_.emplace_back();
    build(0, static_cast<std::uint32_t>(points_.size()), 0);
  }
}

void KdTree3::build(std::uint32_t begin, std::uint32_t end, std::int32_t node_index) {
  Node& node = nodes_[node_index];
  node.begin = begin;
  node.end = end;
  if (end - begin <= kLeafSize) return;

  Eigen::Vector3d lo = points_[order_[begin]];
  Eigen::Vector3d hi = lo;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  std::uint32_t axis = 0;
  const Eigen::Vector3d extent = hi - lo;
  if (extent.y() > extent.x()) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;
  if (extent[axis] <= 0.0) return;  // all points identical: keep as leaf

  const std::uint32_t mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  node.axis = axis;
  node.split = points_[order_[mid]][axis];

  const std::int32_t left = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  const std::int32_t right = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[node_index].left = left;
  nodes_[node_index].right = right;
  build(begin, mid, left);
  build(mid, end, right);
}

void KdTree3::search(std::int32_t node_index, const Eigen::Vector3d& query, Hit& best) const {
  const Node& node = nodes_[node_index];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double d2 = (points_[order_[i]] - query).squaredNorm();
      if (d2 < best.squared_distance) {
        best.squared_distance = d2;
        best.index = order_[i];
      }
    }
    return;
  }
  const double delta = query[node.axis] - node.split;
  const std::int32_t near = delta < 0.0 ? node.left : node.right;
  const std::int32_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, best);
  if (delta * delta < best.squared_distance) search(far, query, best);
}

KdTree3::Hit KdTree3::nearest(const Eigen::Vector3d& query, double max_squared) const {
  Hit best;
  best.squared_distance = max_squared;
  best.index = kNone;
  if (nodes_.empty()) return best;
  search(0, query, best);
  return best;
}

}  // namespace scanstress
