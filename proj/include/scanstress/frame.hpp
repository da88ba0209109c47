#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace scanstress {

// Scalar types a point field may carry on disk / on the wire.
enum class ScalarType : std::uint8_t { F32, F64, U8, U16, U32 };

std::size_t scalar_size(ScalarType type);
const char* scalar_name(ScalarType type);

// One per-point attribute column (intensity, reflectivity, ring/line,
// or any unknown field carried through opaquely). Values are widened to
// double; every supported scalar type round-trips exactly through double.
struct AttributeColumn {
  std::string name;
  ScalarType type = ScalarType::F32;
  std::vector<double> values;
};

// One lidar scan. Column layout: positions / time offsets / attribute
// columns are parallel arrays in acquisition order. Every degradation
// preserves that order: outputs are subsequences (possibly perturbed in
// position) of the input.
struct PointCloudFrame {
  std::uint64_t frame_index = 0;
  std::string sensor_id;
  double base_time = 0.0;  // seconds, absolute scan start

  ScalarType position_type = ScalarType::F32;  // storage type on disk
  ScalarType time_type = ScalarType::F32;

  std::vector<Eigen::Vector3d> positions;
  std::vector<double> time_offsets;  // seconds since base_time, non-decreasing
  std::vector<AttributeColumn> attributes;

  // Points rejected at ingestion because of non-finite coordinates.
  std::size_t ingestion_dropped = 0;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  // Reserve all parallel arrays.
  void reserve(std::size_t n);
  // Append one point with the current attribute columns extended by the
  // given values (must match attributes.size()).
  void push_point(const Eigen::Vector3d& position, double time_offset,
                  const std::vector<double>& attribute_values = {});
};

// Exact comparison including metadata and attribute columns.
bool frames_equal(const PointCloudFrame& a, const PointCloudFrame& b);

// Keep points whose mask entry is nonzero; order preserved, attribute
// values of survivors untouched.
PointCloudFrame filter_by_mask(const PointCloudFrame& frame,
                               const std::vector<std::uint8_t>& keep);

// Drop points with any non-finite coordinate and count them on the result
// (the degradation math is undefined on NaN/Inf inputs).
PointCloudFrame drop_nonfinite(const PointCloudFrame& frame);

// Per-scan estimated sensor motion, consumed by motion distortion.
struct MotionEstimate {
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();   // m/s
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();  // rad/s
};

// One IMU reading; buffers are kept sorted by strictly increasing timestamp.
struct ImuSample {
  double timestamp = 0.0;  // seconds, absolute
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();     // rad/s
  Eigen::Vector3d linear_acceleration = Eigen::Vector3d::Zero();  // m/s^2
};

// Per-frame chain accounting: counts, reduction, per-module wall time.
struct FrameStats {
  std::uint64_t frame_index = 0;
  std::string sensor_id;
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::size_t ingestion_dropped = 0;
  double reduction_ratio = 0.0;  // 1 - output/input, 0 when input empty
  std::vector<std::pair<std::string, double>> module_seconds;  // chain order

  double total_seconds() const;
};

FrameStats make_frame_stats(const PointCloudFrame& input,
                            const PointCloudFrame& output);

}  // namespace scanstress
