#include "scanstress/io/detect.hpp"

#include <algorithm>
#include <cmath>

#include "scanstress/errors.hpp"

namespace scanstress {

std::size_t FieldSchema::point_size() const {
  if (fields.empty()) return 0;
  const Field& last = fields.back();
  return last.offset + scalar_size(last.type);
}

const Field* FieldSchema::find(const std::string& name) const {
  for (const Field& field : fields) {
    if (field.name == name) return &field;
  }
  return nullptr;
}

void FieldSchema::validate() const {
  if (fields.empty()) throw SchemaError("field schema is empty");
  std::size_t cursor = 0;
  for (const Field& field : fields) {
    if (field.offset < cursor) {
      throw SchemaError("field '" + field.name + "' overlaps the previous field (offset " +
                        std::to_string(field.offset) + ", expected >= " +
                        std::to_string(cursor) + ")");
    }
    cursor = field.offset + scalar_size(field.type);
  }
}

FieldSchema schema_of_frame(const PointCloudFrame& frame) {
  FieldSchema schema;
  std::size_t offset = 0;
  auto add = [&](const std::string& name, ScalarType type) {
    schema.fields.push_back({name, type, offset});
    offset += scalar_size(type);
  };
  add("x", frame.position_type);
  add("y", frame.position_type);
  add("z", frame.position_type);
  add("t", frame.time_type);
  for (const AttributeColumn& column : frame.attributes) add(column.name, column.type);
  return schema;
}

bool is_time_field_name(const std::string& name) {
  return name == "t" || name == "time" || name == "timestamp" || name == "offset_time";
}

const char* profile_class_name(ProfileClass cls) {
  switch (cls) {
    case ProfileClass::kGeneric: return "generic";
    case ProfileClass::kOusterLike: return "ouster-like";
    case ProfileClass::kLivoxAviaLike: return "livox-avia-like";
    case ProfileClass::kLivoxMid360Like: return "livox-mid360-like";
  }
  return "?";
}

SensorProfile make_profile(ProfileClass cls) {
  SensorProfile profile;
  profile.profile_class = cls;
  switch (cls) {
    case ProfileClass::kOusterLike:
    case ProfileClass::kLivoxMid360Like:
    case ProfileClass::kGeneric:
      profile.nominal_azimuth_span_deg = 360.0;
      break;
    case ProfileClass::kLivoxAviaLike:
      profile.nominal_azimuth_span_deg = 70.0;
      break;
  }
  profile.nominal_rate_hz = 10.0;
  return profile;
}

double observed_azimuth_span_deg(const PointCloudFrame& frame) {
  std::vector<double> azimuths;
  azimuths.reserve(frame.size());
  for (const Eigen::Vector3d& p : frame.positions) {
    if (p.x() == 0.0 && p.y() == 0.0) continue;
    azimuths.push_back(std::atan2(p.y(), p.x()));
  }
  if (azimuths.size() < 2) return 0.0;
  std::sort(azimuths.begin(), azimuths.end());
  double largest_gap = 2.0 * M_PI - (azimuths.back() - azimuths.front());
  for (std::size_t i = 1; i < azimuths.size(); ++i) {
    largest_gap = std::max(largest_gap, azimuths[i] - azimuths[i - 1]);
  }
  return (2.0 * M_PI - largest_gap) * 180.0 / M_PI;
}

SensorProfile detect_sensor_profile(const FieldSchema& schema,
                                    const PointCloudFrame* sample_frame) {
  if (!schema.has("x") || !schema.has("y") || !schema.has("z")) {
    throw SchemaError("field schema must contain x, y, and z");
  }

  bool has_time = false;
  for (const Field& field : schema.fields) {
    if (is_time_field_name(field.name)) has_time = true;
  }

  const bool livox_layout = (schema.has("intensity") || schema.has("reflectivity")) &&
                            schema.has("tag") && schema.has("line") && has_time;
  if (livox_layout) {
    // Span threshold 300 deg separates the dome-shaped mid360 sweep from
    // the narrow avia wedge; without sample geometry assume the wedge.
    ProfileClass cls = ProfileClass::kLivoxAviaLike;
    if (sample_frame != nullptr && observed_azimuth_span_deg(*sample_frame) > 300.0) {
      cls = ProfileClass::kLivoxMid360Like;
    }
    SensorProfile profile = make_profile(cls);
    profile.field_schema = schema;
    return profile;
  }

  if (schema.has("intensity") && schema.has("reflectivity") && schema.has("line")) {
    SensorProfile profile = make_profile(ProfileClass::kOusterLike);
    profile.field_schema = schema;
    return profile;
  }

  SensorProfile profile = make_profile(ProfileClass::kGeneric);
  profile.field_schema = schema;
  return profile;
}

}  // namespace scanstress
