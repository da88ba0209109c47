#include "scanstress/io/stats.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

#include "scanstress/errors.hpp"

namespace scanstress {

std::string stats_to_json_line(const FrameStats& stats) {
  nlohmann::ordered_json j;
  j["frame_index"] = stats.frame_index;
  j["sensor_id"] = stats.sensor_id;
  j["input_count"] = stats.input_count;
  j["output_count"] = stats.output_count;
  j["reduction_ratio"] = stats.reduction_ratio;
  j["ingestion_dropped"] = stats.ingestion_dropped;
  nlohmann::ordered_json latency;
  for (const auto& [module, seconds] : stats.module_seconds) latency[module] = seconds * 1e3;
  j["latency_ms"] = std::move(latency);
  j["total_ms"] = stats.total_seconds() * 1e3;
  return j.dump();
}

void emit_stats(std::span<const FrameStats> stats, std::ostream& sink) {
  for (const FrameStats& entry : stats) {
    sink << stats_to_json_line(entry) << '\n';
  }
  if (!sink) throw IoError("stats sink write failed");
}

}  // namespace scanstress
