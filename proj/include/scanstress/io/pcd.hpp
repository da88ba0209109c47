#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scanstress/frame.hpp"
#include "scanstress/io/detect.hpp"

namespace scanstress {

enum class PcdEncoding : std::uint8_t { kAscii, kBinary };

struct PcdReadOptions {
  // Frame period used to synthesize linear time offsets when the file has
  // no per-point time field.
  double fallback_period = 0.1;  // seconds
};

struct PcdContents {
  FieldSchema schema;          // file field layout, in declaration order
  PointCloudFrame frame;       // non-finite points already dropped (counted)
  PcdEncoding encoding = PcdEncoding::kAscii;
  bool had_time_field = false;
};

// PCD v0.7, DATA ascii or binary. Fields x/y/z become positions, a field
// named t/time/timestamp/offset_time becomes per-point time offsets, every
// other field is carried as an opaque attribute column. Errors carry byte
// offset context. binary_compressed is rejected as unsupported.
PcdContents read_pcd_file(const std::string& path, const PcdReadOptions& options = {});

// Spec-level convenience: the file's single cloud as a one-frame sequence.
std::vector<PointCloudFrame> read_pcd(const std::string& path, const PcdReadOptions& options = {});

// Writes x, y, z, t plus the frame's attribute columns using their stored
// scalar types. Frame metadata (sensor_id, base_time, frame_index) rides
// in header comments so our own files round-trip exactly.
void write_pcd(const PointCloudFrame& frame, const std::string& path, PcdEncoding encoding);
void write_pcd(const PointCloudFrame& frame, std::ostream& out, PcdEncoding encoding);

}  // namespace scanstress
