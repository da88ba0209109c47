#pragma once

// Internal helpers shared by the PCD and framed-stream codecs. Binary
// layouts are little-endian (matching the host; see README portability
// note).

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include "scanstress/frame.hpp"

namespace scanstress::detail {

inline double decode_scalar(const unsigned char* bytes, ScalarType type) {
  switch (type) {
    case ScalarType::F32: {
      float v;
      std::memcpy(&v, bytes, 4);
      return static_cast<double>(v);
    }
    case ScalarType::F64: {
      double v;
      std::memcpy(&v, bytes, 8);
      return v;
    }
    case ScalarType::U8: return static_cast<double>(bytes[0]);
    case ScalarType::U16: {
      std::uint16_t v;
      std::memcpy(&v, bytes, 2);
      return static_cast<double>(v);
    }
    case ScalarType::U32: {
      std::uint32_t v;
      std::memcpy(&v, bytes, 4);
      return static_cast<double>(v);
    }
  }
  return 0.0;
}

inline void encode_scalar(double value, ScalarType type, std::string& out) {
  switch (type) {
    case ScalarType::F32: {
      const float v = static_cast<float>(value);
      out.append(reinterpret_cast<const char*>(&v), 4);
      return;
    }
    case ScalarType::F64: {
      out.append(reinterpret_cast<const char*>(&value), 8);
      return;
    }
    case ScalarType::U8: {
      const std::uint8_t v = static_cast<std::uint8_t>(value);
      out.append(reinterpret_cast<const char*>(&v), 1);
      return;
    }
    case ScalarType::U16: {
      const std::uint16_t v = static_cast<std::uint16_t>(value);
      out.append(reinterpret_cast<const char*>(&v), 2);
      return;
    }
    case ScalarType::U32: {
      const std::uint32_t v = static_cast<std::uint32_t>(value);
      out.append(reinterpret_cast<const char*>(&v), 4);
      return;
    }
  }
}

// Text form that parses back to the identical stored value: 9 significant
// digits for f32, 17 for f64.
inline void format_scalar(double value, ScalarType type, std::string& out) {
  char buffer[40];
  switch (type) {
    case ScalarType::F32:
      std::snprintf(buffer, sizeof buffer, "%.9g", static_cast<double>(static_cast<float>(value)));
      break;
    case ScalarType::F64:
      std::snprintf(buffer, sizeof buffer, "%.17g", value);
      break;
    default:
      std::snprintf(buffer, sizeof buffer, "%llu", static_cast<unsigned long long>(value));
      break;
  }
  out += buffer;
}

}  // namespace scanstress::detail
