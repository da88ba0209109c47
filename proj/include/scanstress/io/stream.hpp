#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "scanstress/frame.hpp"
#include "scanstress/io/detect.hpp"

namespace scanstress {

// Framed binary stream: per frame, magic "LFRM", u32 LE payload length,
// payload = frame_index u64 | base_time f64 | point count u32 | schema id
// u16, then packed point records. Schema ids index a small built-in
// registry (below); per-point time offsets travel as f32 seconds.
inline constexpr char kFrameMagic[4] = {'L', 'F', 'R', 'M'};

inline constexpr std::uint16_t kStreamSchemaXyz = 0;     // x y z (f32)
inline constexpr std::uint16_t kStreamSchemaXyzt = 1;    // x y z t (f32)
inline constexpr std::uint16_t kStreamSchemaOuster = 2;  // + intensity, reflectivity, line
inline constexpr std::uint16_t kStreamSchemaLivox = 3;   // + reflectivity, tag, line

FieldSchema stream_schema(std::uint16_t id);  // throws IoError on unknown id

// The registry entry whose attribute columns match the frame exactly, or
// nullopt when the frame is not representable on the wire.
std::optional<std::uint16_t> match_stream_schema(const PointCloudFrame& frame);

// Encode frames in order. When schema_id is given it is used for every
// frame; otherwise each frame is matched against the registry (IoError if
// no entry fits).
void write_frame_stream(std::ostream& out, std::span<const PointCloudFrame> frames,
                        std::optional<std::uint16_t> schema_id = {});

// Pull-style decoder; yields frames in arrival order. next() returns
// nullopt at a clean end-of-stream and throws IoError on bad magic or a
// truncated record.
class FrameStreamReader {
 public:
  explicit FrameStreamReader(std::istream& in, double fallback_period = 0.1)
      : in_(in), fallback_period_(fallback_period) {}

  std::optional<PointCloudFrame> next();

 private:
  std::istream& in_;
  double fallback_period_;
  std::size_t byte_offset_ = 0;
};

// Collects the whole stream; errors propagate.
std::vector<PointCloudFrame> read_frame_stream(std::istream& in);

}  // namespace scanstress
