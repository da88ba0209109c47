#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "scanstress/params.hpp"

namespace scanstress {

// Scenario files are YAML with two top-level namespaces:
//
//   pipeline:
//     seed: 42
//     order: [fov_reduction, occlusion, structured_dropout, dropout,
//             sparsification, noise, motion_distortion]
//     randomize_subset: false
//   augmentations:
//     dropout:            { heavy: { ratio: 0.5 } }
//     structured_dropout: { heavy: { azimuth_start_deg: 0, azimuth_extent_deg: 60 } }
//     fov:                { heavy: { azimuth_shrink_deg: 30, elevation_shrink_deg: 15 } }
//     occlusion:          { heavy: { patch_count: 4, patch_radius: 0.8, center_range: [1, 15] } }
//     noise:              { heavy: { sigma: 0.035, outlier_prob: 0.01, outlier_sigma: 0.35 } }
//     sparsify:           { heavy: { stride: 3 } }
//     motion:             { heavy: { linear_velocity: [1.5, 0, 0],
//                                    angular_velocity: [0, 0, 0.375], use_imu: false } }
//
// Anything not specified keeps the built-in tier defaults. Unknown keys,
// type mismatches, and range violations raise ConfigError with the full
// key path.
ScenarioConfig parse_scenario_config(const std::string& text);
ScenarioConfig parse_scenario_config(const std::string& text,
                                     std::span<const std::string> overrides);

// Reads the file (empty path = built-in defaults) and applies overrides of
// the form "augmentations.noise.heavy.sigma=0.04".
ScenarioConfig load_scenario_config(const std::string& path,
                                    std::span<const std::string> overrides = {});

// Fully resolved scenario as JSON and back; used by run manifests so a run
// can be reproduced without the original config file.
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

}  // namespace scanstress
