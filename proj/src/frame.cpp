#include "scanstress/frame.hpp"

#include <cmath>

namespace scanstress {

std::size_t scalar_size(ScalarType type) {
  switch (type) {
    case ScalarType::F32: return 4;
    case ScalarType::F64: return 8;
    case ScalarType::U8: return 1;
    case ScalarType::U16: return 2;
    case ScalarType::U32: return 4;
  }
  return 0;
}

const char* scalar_name(ScalarType type) {
  switch (type) {
    case ScalarType::F32: return "f32";
    case ScalarType::F64: return "f64";
    case ScalarType::U8: return "u8";
    case ScalarType::U16: return "u16";
    case ScalarType::U32: return "u32";
  }
  return "?";
}

void PointCloudFrame::reserve(std::size_t n) {
  positions.reserve(n);
  time_offsets.reserve(n);
  for (auto& column : attributes) column.values.reserve(n);
}

void PointCloudFrame::push_point(const Eigen::Vector3d& position, double time_offset,
                                 const std::vector<double>& attribute_values) {
  positions.push_back(position);
  time_offsets.push_back(time_offset);
  for (std::size_t c = 0; c < attributes.size(); ++c) {
    attributes[c].values.push_back(c < attribute_values.size() ? attribute_values[c] : 0.0);
  }
}

bool frames_equal(const PointCloudFrame& a, const PointCloudFrame& b) {
  if (a.frame_index != b.frame_index || a.sensor_id != b.sensor_id ||
      a.base_time != b.base_time || a.size() != b.size() ||
      a.attributes.size() != b.attributes.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.positions[i] != b.positions[i]) return false;
    if (a.time_offsets[i] != b.time_offsets[i]) return false;
  }
  for (std::size_t c = 0; c < a.attributes.size(); ++c) {
    const auto& ca = a.attributes[c];
    const auto& cb = b.attributes[c];
    if (ca.name != cb.name || ca.type != cb.type || ca.values != cb.values) return false;
  }
  return true;
}

PointCloudFrame filter_by_mask(const PointCloudFrame& frame,
                               const std::vector<std::uint8_t>& keep) {
  PointCloudFrame out;
  out.frame_index = frame.frame_index;
  out.sensor_id = frame.sensor_id;
  out.base_time = frame.base_time;
  out.position_type = frame.position_type;
  out.time_type = frame.time_type;
  out.ingestion_dropped = frame.ingestion_dropped;

  std::size_t count = 0;
  for (std::size_t i = 0; i < frame.size(); ++i) count += keep[i] ? 1 : 0;

  out.positions.reserve(count);
  out.time_offsets.reserve(count);
  out.attributes.resize(frame.attributes.size());
  for (std::size_t c = 0; c < frame.attributes.size(); ++c) {
    out.attributes[c].name = frame.attributes[c].name;
    out.attributes[c].type = frame.attributes[c].type;
    out.attributes[c].values.reserve(count);
  }
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!keep[i]) continue;
    out.positions.push_back(frame.positions[i]);
    out.time_offsets.push_back(frame.time_offsets[i]);
    for (std::size_t c = 0; c < frame.attributes.size(); ++c) {
      out.attributes[c].values.push_back(frame.attributes[c].values[i]);
    }
  }
  return out;
}

PointCloudFrame drop_nonfinite(const PointCloudFrame& frame) {
  std::vector<std::uint8_t> keep(frame.size(), 1);
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const Eigen::Vector3d& p = frame.positions[i];
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()) || !std::isfinite(p.z())) {
      keep[i] = 0;
      ++dropped;
    }
  }
  if (dropped == 0) return frame;
  PointCloudFrame out = filter_by_mask(frame, keep);
  out.ingestion_dropped = frame.ingestion_dropped + dropped;
  return out;
}

double FrameStats::total_seconds() const {
  double total = 0.0;
  for (const auto& [name, seconds] : module_seconds) total += seconds;
  return total;
}

FrameStats make_frame_stats(const PointCloudFrame& input, const PointCloudFrame& output) {
  FrameStats stats;
  stats.frame_index = input.frame_index;
  stats.sensor_id = input.sensor_id;
  stats.input_count = input.size();
  stats.output_count = output.size();
  stats.ingestion_dropped = output.ingestion_dropped;
  stats.reduction_ratio =
      input.empty() ? 0.0
                    : 1.0 - static_cast<double>(output.size()) / static_cast<double>(input.size());
  return stats;
}

}  // namespace scanstress
