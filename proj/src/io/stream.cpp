#include "scanstress/io/stream.hpp"

#include <cstring>
#include <istream>
#include <ostream>

#include "scanstress/errors.hpp"
#include "scalar_codec.hpp"

namespace scanstress {

namespace {

constexpr std::size_t kPayloadHeaderSize = 8 + 8 + 4 + 2;

FieldSchema make_schema(std::initializer_list<std::pair<const char*, ScalarType>> spec) {
  FieldSchema schema;
  std::size_t offset = 0;
  for (const auto& [name, type] : spec) {
    schema.fields.push_back({name, type, offset});
    offset += scalar_size(type);
  }
  return schema;
}

template <typename T>
void append_le(std::string& out, T value) {
  out.append(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T read_le(const unsigned char* bytes) {
  T value;
  std::memcpy(&value, bytes, sizeof value);
  return value;
}

}  // namespace

FieldSchema stream_schema(std::uint16_t id) {
  switch (id) {
    case kStreamSchemaXyz:
      return make_schema({{"x", ScalarType::F32}, {"y", ScalarType::F32}, {"z", ScalarType::F32}});
    case kStreamSchemaXyzt:
      return make_schema({{"x", ScalarType::F32},
                          {"y", ScalarType::F32},
                          {"z", ScalarType::F32},
                          {"t", ScalarType::F32}});
    case kStreamSchemaOuster:
      return make_schema({{"x", ScalarType::F32},
                          {"y", ScalarType::F32},
                          {"z", ScalarType::F32},
                          {"intensity", ScalarType::F32},
                          {"reflectivity", ScalarType::F32},
                          {"line", ScalarType::U16},
                          {"t", ScalarType::F32}});
    case kStreamSchemaLivox:
      return make_schema({{"x", ScalarType::F32},
                          {"y", ScalarType::F32},
                          {"z", ScalarType::F32},
                          {"reflectivity", ScalarType::U8},
                          {"tag", ScalarType::U8},
                          {"line", ScalarType::U8},
                          {"offset_time", ScalarType::F32}});
  }
  throw IoError("unknown stream schema id " + std::to_string(id));
}

std::optional<std::uint16_t> match_stream_schema(const PointCloudFrame& frame) {
  const auto matches = [&](std::uint16_t id) {
    const FieldSchema schema = stream_schema(id);
    std::vector<const Field*> attr_fields;
    for (const Field& field : schema.fields) {
      if (field.name == "x" || field.name == "y" || field.name == "z" ||
          is_time_field_name(field.name)) {
        continue;
      }
      attr_fields.push_back(&field);
    }
    if (attr_fields.size() != frame.attributes.size()) return false;
    for (std::size_t i = 0; i < attr_fields.size(); ++i) {
      if (attr_fields[i]->name != frame.attributes[i].name ||
          attr_fields[i]->type != frame.attributes[i].type) {
        return false;
      }
    }
    return true;
  };
  for (std::uint16_t id : {kStreamSchemaXyzt, kStreamSchemaOuster, kStreamSchemaLivox}) {
    if (matches(id)) return id;
  }
  return std::nullopt;
}

void write_frame_stream(std::ostream& out, std::span<const PointCloudFrame> frames,
                        std::optional<std::uint16_t> schema_id) {
  std::string payload;
  for (const PointCloudFrame& frame : frames) {
    std::uint16_t id;
    if (schema_id) {
      id = *schema_id;
    } else {
      const auto matched = match_stream_schema(frame);
      if (!matched) {
        throw IoError("frame " + std::to_string(frame.frame_index) +
                      " has attribute columns not representable by any stream schema");
      }
      id = *matched;
    }
    const FieldSchema schema = stream_schema(id);

    payload.clear();
    append_le(payload, static_cast<std::uint64_t>(frame.frame_index));
    append_le(payload, frame.base_time);
    append_le(payload, static_cast<std::uint32_t>(frame.size()));
    append_le(payload, id);
    for (std::size_t row = 0; row < frame.size(); ++row) {
      for (const Field& field : schema.fields) {
        double value = 0.0;
        if (field.name == "x") value = frame.positions[row].x();
        else if (field.name == "y") value = frame.positions[row].y();
        else if (field.name == "z") value = frame.positions[row].z();
        else if (is_time_field_name(field.name)) value = frame.time_offsets[row];
        else {
          for (const AttributeColumn& column : frame.attributes) {
            if (column.name == field.name) {
              value = column.values[row];
              break;
            }
          }
        }
        detail::encode_scalar(value, field.type, payload);
      }
    }

    out.write(kFrameMagic, 4);
    const std::uint32_t length = static_cast<std::uint32_t>(payload.size());
    out.write(reinterpret_cast<const char*>(&length), 4);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  if (!out) throw IoError("frame stream write failed");
}

std::optional<PointCloudFrame> FrameStreamReader::next() {
  char magic[4];
  in_.read(magic, 4);
  const std::size_t magic_got = static_cast<std::size_t>(in_.gcount());
  if (magic_got == 0) return std::nullopt;  // clean end of stream
  if (magic_got < 4 || std::memcmp(magic, kFrameMagic, 4) != 0) {
    throw IoError("bad stream magic at byte " + std::to_string(byte_offset_));
  }
  std::uint32_t length = 0;
  in_.read(reinterpret_cast<char*>(&length), 4);
  if (in_.gcount() < 4) {
    throw IoError("truncated record length at byte " + std::to_string(byte_offset_ + 4));
  }
  if (length < kPayloadHeaderSize) {
    throw IoError("record payload too short at byte " + std::to_string(byte_offset_ + 4));
  }
  std::string payload(length, '\0');
  in_.read(payload.data(), static_cast<std::streamsize>(length));
  if (static_cast<std::size_t>(in_.gcount()) < length) {
    throw IoError("truncated record payload at byte " +
                  std::to_string(byte_offset_ + 8 + static_cast<std::size_t>(in_.gcount())));
  }
  byte_offset_ += 8 + length;

  const unsigned char* bytes = reinterpret_cast<const unsigned char*>(payload.data());
  PointCloudFrame frame;
  frame.frame_index = read_le<std::uint64_t>(bytes);
  frame.base_time = read_le<double>(bytes + 8);
  const std::uint32_t count = read_le<std::uint32_t>(bytes + 16);
  const std::uint16_t schema_id = read_le<std::uint16_t>(bytes + 20);
  const FieldSchema schema = stream_schema(schema_id);
  const std::size_t expected = kPayloadHeaderSize + schema.point_size() * count;
  if (payload.size() != expected) {
    throw IoError("record size mismatch: payload " + std::to_string(payload.size()) +
                  " bytes, schema implies " + std::to_string(expected));
  }

  int time_index = -1;
  for (std::size_t f = 0; f < schema.fields.size(); ++f) {
    if (is_time_field_name(schema.fields[f].name)) time_index = static_cast<int>(f);
    else if (schema.fields[f].name != "x" && schema.fields[f].name != "y" &&
             schema.fields[f].name != "z") {
      frame.attributes.push_back({schema.fields[f].name, schema.fields[f].type, {}});
      frame.attributes.back().values.reserve(count);
    }
  }
  frame.positions.resize(count);
  frame.time_offsets.resize(count);
  frame.time_type = time_index >= 0 ? schema.fields[time_index].type : ScalarType::F32;

  const unsigned char* records = bytes + kPayloadHeaderSize;
  for (std::uint32_t row = 0; row < count; ++row) {
    const unsigned char* record = records + row * schema.point_size();
    std::size_t attr = 0;
    double x = 0, y = 0, z = 0, t = 0;
    bool have_time = false;
    for (const Field& field : schema.fields) {
      const double value = detail::decode_scalar(record + field.offset, field.type);
      if (field.name == "x") x = value;
      else if (field.name == "y") y = value;
      else if (field.name == "z") z = value;
      else if (is_time_field_name(field.name)) {
        t = value;
        have_time = true;
      } else {
        frame.attributes[attr++].values.push_back(value);
      }
    }
    frame.positions[row] = Eigen::Vector3d(x, y, z);
    frame.time_offsets[row] =
        have_time ? t : fallback_period_ * static_cast<double>(row) / std::max(count, 1u);
  }
  return drop_nonfinite(frame);
}

std::vector<PointCloudFrame> read_frame_stream(std::istream& in) {
  FrameStreamReader reader(in);
  std::vector<PointCloudFrame> frames;
  while (auto frame = reader.next()) frames.push_back(std::move(*frame));
  return frames;
}

}  // namespace scanstress
