#pragma once

// Shared generators for the test suites. Values are kept exactly
// representable in f32 where the on-disk schema stores f32, so binary
// round-trips can be compared bit-for-bit.

#include <cstdint>
#include <string>
#include <vector>

#include "scanstress/frame.hpp"
#include "scanstress/rng.hpp"

namespace scanstress::testing {

inline float unit_to_range_f32(double u, double lo, double hi) {
  return static_cast<float>(lo + (hi - lo) * u);
}

struct FrameSpec {
  std::size_t points = 100;
  bool with_intensity = true;
  bool with_ring = false;    // u16 column named "ring"
  bool stream_ouster = false;  // exact ouster stream attribute set
  bool stream_livox = false;   // exact livox stream attribute set
  std::string sensor_id;
  double base_time = 0.0;
  std::uint64_t frame_index = 0;
};

inline PointCloudFrame make_random_frame(std::uint64_t seed, const FrameSpec& spec = {}) {
  PointCloudFrame frame;
  frame.frame_index = spec.frame_index;
  frame.sensor_id = spec.sensor_id;
  frame.base_time = spec.base_time;

  if (spec.stream_ouster) {
    frame.attributes.push_back({"intensity", ScalarType::F32, {}});
    frame.attributes.push_back({"reflectivity", ScalarType::F32, {}});
    frame.attributes.push_back({"line", ScalarType::U16, {}});
  } else if (spec.stream_livox) {
    frame.attributes.push_back({"reflectivity", ScalarType::U8, {}});
    frame.attributes.push_back({"tag", ScalarType::U8, {}});
    frame.attributes.push_back({"line", ScalarType::U8, {}});
  } else {
    if (spec.with_intensity) frame.attributes.push_back({"intensity", ScalarType::F32, {}});
    if (spec.with_ring) frame.attributes.push_back({"ring", ScalarType::U16, {}});
  }

  RandomStream stream(seed, 0x7E57);
  float offset = 0.0f;
  for (std::size_t i = 0; i < spec.points; ++i) {
    const Eigen::Vector3d p(unit_to_range_f32(stream.next_unit(), -30.0, 30.0),
                            unit_to_range_f32(stream.next_unit(), -30.0, 30.0),
                            unit_to_range_f32(stream.next_unit(), -10.0, 10.0));
    offset += unit_to_range_f32(stream.next_unit(), 0.0, 0.002f);
    std::vector<double> attrs;
    for (const AttributeColumn& column : frame.attributes) {
      if (column.type == ScalarType::F32) {
        attrs.push_back(unit_to_range_f32(stream.next_unit(), 0.0, 255.0));
      } else {
        attrs.push_back(static_cast<double>(stream.next_u64() %
                                            (column.type == ScalarType::U8 ? 256u : 65536u)));
      }
    }
    frame.push_point(p, static_cast<double>(offset), attrs);
  }
  return frame;
}

// Exact metadata/order/attribute equality with positions compared to a
// tolerance (the exact-rotation branch of motion distortion is evaluated
// through different but algebraically equal forms on the two sides).
inline bool frames_close(const PointCloudFrame& a, const PointCloudFrame& b, double tol) {
  if (a.size() != b.size() || a.time_offsets != b.time_offsets ||
      a.attributes.size() != b.attributes.size()) {
    return false;
  }
  for (std::size_t c = 0; c < a.attributes.size(); ++c) {
    if (a.attributes[c].values != b.attributes[c].values) return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a.positions[i] - b.positions[i]).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

// True when `sub` is a (possibly perturbed in position) subsequence of
// `full` judged by time offsets and attribute values, in order.
inline bool is_ordered_subsequence(const PointCloudFrame& full, const PointCloudFrame& sub) {
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    bool found = false;
    while (cursor < full.size()) {
      bool same = full.time_offsets[cursor] == sub.time_offsets[i];
      for (std::size_t c = 0; same && c < full.attributes.size(); ++c) {
        same = full.attributes[c].values[cursor] == sub.attributes[c].values[i];
      }
      ++cursor;
      if (same) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace scanstress::testing
