#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scanstress/frame.hpp"

namespace scanstress {

struct Field {
  std::string name;
  ScalarType type = ScalarType::F32;
  std::size_t offset = 0;  // bytes within a packed point record
};

struct FieldSchema {
  std::vector<Field> fields;

  std::size_t point_size() const;
  const Field* find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }
  // Offsets ascending and non-overlapping; throws SchemaError otherwise.
  void validate() const;
};

// Packed schema implied by a frame's columns: x, y, z, t, then the
// attribute columns in stored order.
FieldSchema schema_of_frame(const PointCloudFrame& frame);

// Per-point time fields recognized on ingestion.
bool is_time_field_name(const std::string& name);

enum class ProfileClass : std::uint8_t { kGeneric, kOusterLike, kLivoxAviaLike, kLivoxMid360Like };

const char* profile_class_name(ProfileClass cls);

struct SensorProfile {
  ProfileClass profile_class = ProfileClass::kGeneric;
  FieldSchema field_schema;
  double nominal_azimuth_span_deg = 360.0;
  double nominal_rate_hz = 10.0;
};

SensorProfile make_profile(ProfileClass cls);

// Azimuth extent actually covered by a frame, in degrees: 360 minus the
// largest angular gap between consecutive (sorted) point azimuths.
double observed_azimuth_span_deg(const PointCloudFrame& frame);

// Field-schema introspection (the file-level analogue of runtime topic
// discovery). Rules: the livox custom layout (x,y,z + tag + line +
// intensity-or-reflectivity + per-point time) wins first and is split into
// mid360-like / avia-like by the sample frame's observed azimuth span
// (threshold 300 deg; without a sample the narrow avia-like is assumed);
// then {x,y,z,intensity,reflectivity,line} maps to ouster-like; anything
// else with x,y,z is generic. Missing x/y/z throws SchemaError.
SensorProfile detect_sensor_profile(const FieldSchema& schema,
                                    const PointCloudFrame* sample_frame = nullptr);

}  // namespace scanstress
