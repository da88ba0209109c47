#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "scanstress/frame.hpp"

namespace scanstress {

// One JSON object for one frame: frame_index, sensor_id, input_count,
// output_count, reduction_ratio, latency_ms (per module, chain order) plus
// total_ms and ingestion_dropped.
std::string stats_to_json_line(const FrameStats& stats);

// JSON-lines emission, one line per frame, in sequence order.
void emit_stats(std::span<const FrameStats> stats, std::ostream& sink);

}  // namespace scanstress
