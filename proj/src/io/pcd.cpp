#include "scanstress/io/pcd.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scanstress/errors.hpp"
#include "scalar_codec.hpp"

namespace scanstress {

namespace {

struct HeaderInfo {
  FieldSchema schema;
  std::size_t points = 0;
  PcdEncoding encoding = PcdEncoding::kAscii;
  std::string sensor_id;
  double base_time = 0.0;
  std::uint64_t frame_index = 0;
  std::size_t data_offset = 0;  // byte offset where the body starts
};

[[noreturn]] void fail(const std::string& what, std::size_t byte_offset) {
  throw IoError(what + " (at byte " + std::to_string(byte_offset) + ")");
}

ScalarType scalar_from_pcd(char type, std::size_t size, std::size_t byte_offset) {
  if (type == 'F' && size == 4) return ScalarType::F32;
  if (type == 'F' && size == 8) return ScalarType::F64;
  if (type == 'U' && size == 1) return ScalarType::U8;
  if (type == 'U' && size == 2) return ScalarType::U16;
  if (type == 'U' && size == 4) return ScalarType::U32;
  fail(std::string("unsupported PCD field type ") + type + std::to_string(size), byte_offset);
}

void pcd_type_of(ScalarType type, char& letter, std::size_t& size) {
  switch (type) {
    case ScalarType::F32: letter = 'F'; size = 4; return;
    case ScalarType::F64: letter = 'F'; size = 8; return;
    case ScalarType::U8: letter = 'U'; size = 1; return;
    case ScalarType::U16: letter = 'U'; size = 2; return;
    case ScalarType::U32: letter = 'U'; size = 4; return;
  }
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

HeaderInfo parse_header(std::istream& in) {
  HeaderInfo header;
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  std::vector<char> types;
  std::vector<std::size_t> counts;
  bool have_points = false;
  std::size_t offset = 0;

  std::string line;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Metadata comments written by this library.
      const auto parse_meta = [&](const char* key) -> const char* {
        const std::string prefix = std::string("# ") + key + "=";
        return line.rfind(prefix, 0) == 0 ? line.c_str() + prefix.size() : nullptr;
      };
      if (const char* v = parse_meta("sensor_id")) header.sensor_id = v;
      if (const char* v = parse_meta("base_time")) header.base_time = std::strtod(v, nullptr);
      if (const char* v = parse_meta("frame_index"))
        header.frame_index = std::strtoull(v, nullptr, 10);
      continue;
    }
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (key == "VERSION" || key == "VIEWPOINT" || key == "WIDTH" || key == "HEIGHT") {
      continue;  // tolerated; POINTS is authoritative for the count
    }
    if (key == "FIELDS") {
      names.assign(tokens.begin() + 1, tokens.end());
    } else if (key == "SIZE") {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        sizes.push_back(std::strtoull(tokens[i].c_str(), nullptr, 10));
    } else if (key == "TYPE") {
      for (std::size_t i = 1; i < tokens.size(); ++i) types.push_back(tokens[i][0]);
    } else if (key == "COUNT") {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        counts.push_back(std::strtoull(tokens[i].c_str(), nullptr, 10));
    } else if (key == "POINTS") {
      if (tokens.size() < 2) fail("POINTS line missing value", line_offset);
      header.points = std::strtoull(tokens[1].c_str(), nullptr, 10);
      have_points = true;
    } else if (key == "DATA") {
      if (tokens.size() < 2) fail("DATA line missing encoding", line_offset);
      if (tokens[1] == "ascii") {
        header.encoding = PcdEncoding::kAscii;
      } else if (tokens[1] == "binary") {
        header.encoding = PcdEncoding::kBinary;
      } else {
        fail("unsupported PCD DATA encoding '" + tokens[1] + "'", line_offset);
      }
      header.data_offset = offset;
      if (names.empty()) fail("PCD header has no FIELDS line", line_offset);
      if (sizes.size() != names.size() || types.size() != names.size())
        fail("PCD FIELDS/SIZE/TYPE lengths disagree", line_offset);
      if (!counts.empty()) {
        if (counts.size() != names.size()) fail("PCD COUNT length disagrees", line_offset);
        for (std::size_t c : counts) {
          if (c != 1) fail("unsupported PCD COUNT != 1", line_offset);
        }
      }
      if (!have_points) fail("PCD header has no POINTS line", line_offset);
      std::size_t field_offset = 0;
      for (std::size_t i = 0; i < names.size(); ++i) {
        const ScalarType type = scalar_from_pcd(types[i], sizes[i], line_offset);
        header.schema.fields.push_back({names[i], type, field_offset});
        field_offset += scalar_size(type);
      }
      header.schema.validate();
      return header;
    } else {
      fail("unrecognized PCD header line '" + key + "'", line_offset);
    }
  }
  fail("PCD header ended before DATA line", offset);
}

PointCloudFrame build_frame(const HeaderInfo& header,
                            const std::vector<std::vector<double>>& columns,
                            const PcdReadOptions& options, bool* had_time_field) {
  const auto& fields = header.schema.fields;
  int xi = -1, yi = -1, zi = -1, ti = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == "x") xi = static_cast<int>(i);
    else if (fields[i].name == "y") yi = static_cast<int>(i);
    else if (fields[i].name == "z") zi = static_cast<int>(i);
    else if (ti < 0 && is_time_field_name(fields[i].name)) ti = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0 || zi < 0) throw SchemaError("PCD file lacks x/y/z fields");
  *had_time_field = ti >= 0;

  PointCloudFrame frame;
  frame.sensor_id = header.sensor_id;
  frame.base_time = header.base_time;
  frame.frame_index = header.frame_index;
  frame.position_type = fields[xi].type;
  frame.time_type = ti >= 0 ? fields[ti].type : ScalarType::F32;

  const std::size_t n = header.points;
  frame.positions.resize(n);
  frame.time_offsets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    frame.positions[i] = Eigen::Vector3d(columns[xi][i], columns[yi][i], columns[zi][i]);
    frame.time_offsets[i] =
        ti >= 0 ? columns[ti][i]
                : options.fallback_period * static_cast<double>(i) / static_cast<double>(n);
  }
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (static_cast<int>(f) == xi || static_cast<int>(f) == yi || static_cast<int>(f) == zi ||
        static_cast<int>(f) == ti) {
      continue;
    }
    frame.attributes.push_back({fields[f].name, fields[f].type, columns[f]});
  }
  return frame;
}

}  // namespace

PcdContents read_pcd_file(const std::string& path, const PcdReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  const HeaderInfo header = parse_header(in);
  const std::size_t field_count = header.schema.fields.size();
  std::vector<std::vector<double>> columns(field_count);
  for (auto& column : columns) column.reserve(header.points);

  if (header.encoding == PcdEncoding::kAscii) {
    for (std::size_t row = 0; row < header.points; ++row) {
      for (std::size_t f = 0; f < field_count; ++f) {
        std::string token;
        if (!(in >> token)) {
          fail("PCD body truncated: header declares " + std::to_string(header.points) +
                   " points, row " + std::to_string(row) + " incomplete",
               header.data_offset);
        }
        char* end = nullptr;
        double value = std::strtod(token.c_str(), &end);
        if (end == token.c_str())
          fail("PCD ascii body has non-numeric token '" + token + "'", header.data_offset);
        // Quantize to the field's storage type so text produced by
        // write_pcd parses back to the identical stored value.
        if (header.schema.fields[f].type == ScalarType::F32) {
          value = static_cast<double>(static_cast<float>(value));
        }
        columns[f].push_back(value);
      }
    }
  } else {
    const std::size_t point_size = header.schema.point_size();
    std::string body(point_size * header.points, '\0');
    in.read(body.data(), static_cast<std::streamsize>(body.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got < body.size()) {
      fail("PCD binary body truncated: expected " + std::to_string(body.size()) +
               " bytes, got " + std::to_string(got),
           header.data_offset + got);
    }
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(body.data());
    for (std::size_t row = 0; row < header.points; ++row) {
      const unsigned char* record = bytes + row * point_size;
      for (std::size_t f = 0; f < field_count; ++f) {
        const Field& field = header.schema.fields[f];
        columns[f].push_back(detail::decode_scalar(record + field.offset, field.type));
      }
    }
  }

  PcdContents contents;
  contents.schema = header.schema;
  contents.encoding = header.encoding;
  PointCloudFrame raw = build_frame(header, columns, options, &contents.had_time_field);
  contents.frame = drop_nonfinite(raw);
  return contents;
}

std::vector<PointCloudFrame> read_pcd(const std::string& path, const PcdReadOptions& options) {
  std::vector<PointCloudFrame> frames;
  frames.push_back(read_pcd_file(path, options).frame);
  return frames;
}

void write_pcd(const PointCloudFrame& frame, std::ostream& out, PcdEncoding encoding) {
  const FieldSchema schema = schema_of_frame(frame);
  const std::size_t n = frame.size();

  out << "# .PCD v0.7 - Point Cloud Data file format\n";
  if (!frame.sensor_id.empty()) out << "# sensor_id=" << frame.sensor_id << "\n";
  if (frame.base_time != 0.0) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", frame.base_time);
    out << "# base_time=" << buffer << "\n";
  }
  if (frame.frame_index != 0) out << "# frame_index=" << frame.frame_index << "\n";
  out << "VERSION 0.7\nFIELDS";
  for (const Field& field : schema.fields) out << ' ' << field.name;
  out << "\nSIZE";
  for (const Field& field : schema.fields) {
    char letter;
    std::size_t size;
    pcd_type_of(field.type, letter, size);
    out << ' ' << size;
  }
  out << "\nTYPE";
  for (const Field& field : schema.fields) {
    char letter;
    std::size_t size;
    pcd_type_of(field.type, letter, size);
    out << ' ' << letter;
  }
  out << "\nCOUNT";
  for (std::size_t i = 0; i < schema.fields.size(); ++i) out << " 1";
  out << "\nWIDTH " << n << "\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS " << n << "\nDATA "
      << (encoding == PcdEncoding::kAscii ? "ascii" : "binary") << "\n";

  auto value_of = [&](std::size_t field_index, std::size_t row) -> double {
    switch (field_index) {
      case 0: return frame.positions[row].x();
      case 1: return frame.positions[row].y();
      case 2: return frame.positions[row].z();
      case 3: return frame.time_offsets[row];
      default: return frame.attributes[field_index - 4].values[row];
    }
  };

  if (encoding == PcdEncoding::kAscii) {
    std::string line;
    for (std::size_t row = 0; row < n; ++row) {
      line.clear();
      for (std::size_t f = 0; f < schema.fields.size(); ++f) {
        if (f != 0) line += ' ';
        detail::format_scalar(value_of(f, row), schema.fields[f].type, line);
      }
      line += '\n';
      out << line;
    }
  } else {
    std::string body;
    body.reserve(schema.point_size() * n);
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t f = 0; f < schema.fields.size(); ++f) {
        detail::encode_scalar(value_of(f, row), schema.fields[f].type, body);
      }
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
  }
  if (!out) throw IoError("PCD write failed");
}

void write_pcd(const PointCloudFrame& frame, const std::string& path, PcdEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_pcd(frame, out, encoding);
}

}  // namespace scanstress
