#include "scanstress/io/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "scanstress/errors.hpp"

namespace scanstress {

namespace {

using nlohmann::json;

[[noreturn]] void fail_path(const std::string& path, const std::string& what) {
  throw ConfigError("config key '" + path + "': " + what);
}

double as_double(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail_path(path, "expected a number");
  }
}

int as_int(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    fail_path(path, "expected an integer");
  }
}

bool as_bool(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail_path(path, "expected a boolean");
  }
}

std::uint64_t as_u64(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    fail_path(path, "expected a non-negative integer");
  }
}

Eigen::Vector3d as_vec3(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() != 3) fail_path(path, "expected a list of 3 numbers");
  return {as_double(node[0], path), as_double(node[1], path), as_double(node[2], path)};
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) fail_path(path, "expected a mapping");
}

void check_keys(const YAML::Node& node, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& entry : node) {
    const std::string key = entry.first.as<std::string>();
    bool ok = false;
    for (const char* candidate : allowed) {
      if (key == candidate) {
        ok = true;
        break;
      }
    }
    if (!ok) fail_path(path.empty() ? key : path + "." + key, "unknown key");
  }
}

// Current shrink amounts are not stored in DegradationParams (only the
// resulting limits are), so fov overrides rebuild limits from the pair of
// shrink keys with per-tier defaults filled in.
struct FovShrink {
  double azimuth_deg;
  double elevation_deg;
};

FovShrink default_shrink(Tier tier) {
  static constexpr double kAz[] = {10.0, 20.0, 30.0, 40.0};
  const double az = kAz[static_cast<int>(tier)];
  return {az, 0.5 * az};
}

void parse_module_tier(const std::string& group, const YAML::Node& node, const std::string& path,
                       Tier tier, DegradationParams& params) {
  require_map(node, path);
  if (group == "dropout") {
    check_keys(node, path, {"ratio"});
    if (node["ratio"]) params.dropout_ratio = as_double(node["ratio"], path + ".ratio");
  } else if (group == "structured_dropout") {
    check_keys(node, path, {"azimuth_start_deg", "azimuth_extent_deg"});
    SectorParams sector;
    const double deg = M_PI / 180.0;
    if (node["azimuth_start_deg"])
      sector.azimuth_start = as_double(node["azimuth_start_deg"], path + ".azimuth_start_deg") * deg;
    if (!node["azimuth_extent_deg"]) fail_path(path, "missing azimuth_extent_deg");
    sector.azimuth_extent =
        as_double(node["azimuth_extent_deg"], path + ".azimuth_extent_deg") * deg;
    params.structured_sector = sector;
  } else if (group == "fov") {
    check_keys(node, path, {"azimuth_shrink_deg", "elevation_shrink_deg"});
    FovShrink shrink = default_shrink(tier);
    if (node["azimuth_shrink_deg"]) {
      shrink.azimuth_deg = as_double(node["azimuth_shrink_deg"], path + ".azimuth_shrink_deg");
      shrink.elevation_deg = 0.5 * shrink.azimuth_deg;
    }
    if (node["elevation_shrink_deg"])
      shrink.elevation_deg = as_double(node["elevation_shrink_deg"], path + ".elevation_shrink_deg");
    params.fov = fov_from_shrink(shrink.azimuth_deg, shrink.elevation_deg);
  } else if (group == "occlusion") {
    check_keys(node, path, {"patch_count", "patch_radius", "center_range"});
    if (node["patch_count"])
      params.occlusion.patch_count = as_int(node["patch_count"], path + ".patch_count");
    if (node["patch_radius"])
      params.occlusion.patch_radius = as_double(node["patch_radius"], path + ".patch_radius");
    if (node["center_range"]) {
      const YAML::Node range = node["center_range"];
      if (!range.IsSequence() || range.size() != 2)
        fail_path(path + ".center_range", "expected [min, max]");
      params.occlusion.center_min = as_double(range[0], path + ".center_range");
      params.occlusion.center_max = as_double(range[1], path + ".center_range");
    }
  } else if (group == "noise") {
    check_keys(node, path, {"sigma", "outlier_prob", "outlier_sigma"});
    if (node["sigma"]) params.noise.sigma = as_double(node["sigma"], path + ".sigma");
    if (node["outlier_prob"])
      params.noise.outlier_prob = as_double(node["outlier_prob"], path + ".outlier_prob");
    if (node["outlier_sigma"])
      params.noise.outlier_sigma = as_double(node["outlier_sigma"], path + ".outlier_sigma");
  } else if (group == "sparsify") {
    check_keys(node, path, {"stride"});
    if (node["stride"]) params.sparsify_stride = as_int(node["stride"], path + ".stride");
  } else if (group == "motion") {
    check_keys(node, path, {"linear_velocity", "angular_velocity", "use_imu"});
    if (node["linear_velocity"])
      params.motion.linear_velocity = as_vec3(node["linear_velocity"], path + ".linear_velocity");
    if (node["angular_velocity"])
      params.motion.angular_velocity =
          as_vec3(node["angular_velocity"], path + ".angular_velocity");
    if (node["use_imu"]) params.motion.use_imu = as_bool(node["use_imu"], path + ".use_imu");
  }
}

ScenarioConfig parse_tree(const YAML::Node& root) {
  ScenarioConfig config = default_scenario();
  if (!root || root.IsNull()) return config;
  if (!root.IsMap()) throw ConfigError("scenario config: top level must be a mapping");
  check_keys(root, "", {"pipeline", "augmentations"});

  if (const YAML::Node pipeline = root["pipeline"]) {
    require_map(pipeline, "pipeline");
    check_keys(pipeline, "pipeline", {"seed", "order", "randomize_subset"});
    if (pipeline["seed"]) config.global_seed = as_u64(pipeline["seed"], "pipeline.seed");
    if (pipeline["randomize_subset"])
      config.randomize_subset = as_bool(pipeline["randomize_subset"], "pipeline.randomize_subset");
    if (const YAML::Node order = pipeline["order"]) {
      if (!order.IsSequence()) fail_path("pipeline.order", "expected a list of module names");
      config.module_chain.clear();
      for (const auto& entry : order) {
        config.module_chain.push_back(module_from_name(entry.as<std::string>()));
      }
    }
  }

  if (const YAML::Node augmentations = root["augmentations"]) {
    require_map(augmentations, "augmentations");
    check_keys(augmentations, "augmentations",
               {"dropout", "structured_dropout", "fov", "occlusion", "noise", "sparsify",
                "motion"});
    for (const auto& group_entry : augmentations) {
      const std::string group = group_entry.first.as<std::string>();
      const YAML::Node group_node = group_entry.second;
      const std::string group_path = "augmentations." + group;
      require_map(group_node, group_path);
      for (const auto& tier_entry : group_node) {
        const std::string tier_key = tier_entry.first.as<std::string>();
        Tier tier;
        try {
          tier = tier_from_name(tier_key);
        } catch (const ConfigError&) {
          fail_path(group_path + "." + tier_key, "unknown severity tier");
        }
        parse_module_tier(group, tier_entry.second, group_path + "." + tier_key, tier,
                          config.tiers[tier]);
      }
    }
  }

  validate_scenario(config);
  return config;
}

void apply_override(YAML::Node root, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + spec + "' is not of the form key.path=value");
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream stream(path);
  std::string part;
  while (std::getline(stream, part, '.')) {
    if (part.empty()) throw ConfigError("override '" + spec + "' has an empty path segment");
    parts.push_back(part);
  }

  YAML::Node node = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node child = node[parts[i]];
    node.reset(child);
  }
  try {
    node[parts.back()] = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError("override '" + spec + "': unparseable value (" + e.what() + ")");
  }
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
  return parse_scenario_config(text, {});
}

ScenarioConfig parse_scenario_config(const std::string& text,
                                     std::span<const std::string> overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario config: YAML parse error: ") + e.what());
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const std::string& spec : overrides) apply_override(root, spec);
  return parse_tree(root);
}

ScenarioConfig load_scenario_config(const std::string& path,
                                    std::span<const std::string> overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  return parse_scenario_config(text, overrides);
}

nlohmann::json scenario_to_json(const ScenarioConfig& config) {
  json j;
  j["seed"] = config.global_seed;
  j["randomize_subset"] = config.randomize_subset;
  j["order"] = json::array();
  for (ModuleKind kind : config.module_chain) j["order"].push_back(module_name(kind));
  json tiers;
  for (const auto& [tier, p] : config.tiers) {
    json t;
    t["dropout_ratio"] = p.dropout_ratio;
    if (p.structured_sector) {
      t["structured_sector"] = {{"azimuth_start", p.structured_sector->azimuth_start},
                                {"azimuth_extent", p.structured_sector->azimuth_extent}};
    } else {
      t["structured_sector"] = nullptr;
    }
    t["fov"] = {{"theta_max", p.fov.theta_max}, {"phi_max", p.fov.phi_max}};
    t["occlusion"] = {{"patch_count", p.occlusion.patch_count},
                      {"patch_radius", p.occlusion.patch_radius},
                      {"center_min", p.occlusion.center_min},
                      {"center_max", p.occlusion.center_max}};
    t["noise"] = {{"sigma", p.noise.sigma},
                  {"outlier_prob", p.noise.outlier_prob},
                  {"outlier_sigma", p.noise.outlier_sigma}};
    t["sparsify_stride"] = p.sparsify_stride;
    t["motion"] = {
        {"linear_velocity",
         {p.motion.linear_velocity.x(), p.motion.linear_velocity.y(), p.motion.linear_velocity.z()}},
        {"angular_velocity",
         {p.motion.angular_velocity.x(), p.motion.angular_velocity.y(),
          p.motion.angular_velocity.z()}},
        {"use_imu", p.motion.use_imu}};
    tiers[tier_name(tier)] = std::move(t);
  }
  j["tiers"] = std::move(tiers);
  return j;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig config;
  config.global_seed = j.at("seed").get<std::uint64_t>();
  config.randomize_subset = j.value("randomize_subset", false);
  for (const auto& name : j.at("order")) {
    config.module_chain.push_back(module_from_name(name.get<std::string>()));
  }
  for (Tier tier : kAllTiers) {
    const json& t = j.at("tiers").at(tier_name(tier));
    DegradationParams p;
    p.dropout_ratio = t.at("dropout_ratio").get<double>();
    if (!t.at("structured_sector").is_null()) {
      p.structured_sector = SectorParams{t["structured_sector"].at("azimuth_start").get<double>(),
                                         t["structured_sector"].at("azimuth_extent").get<double>()};
    }
    p.fov.theta_max = t.at("fov").at("theta_max").get<double>();
    p.fov.phi_max = t.at("fov").at("phi_max").get<double>();
    p.occlusion.patch_count = t.at("occlusion").at("patch_count").get<int>();
    p.occlusion.patch_radius = t.at("occlusion").at("patch_radius").get<double>();
    p.occlusion.center_min = t.at("occlusion").at("center_min").get<double>();
    p.occlusion.center_max = t.at("occlusion").at("center_max").get<double>();
    p.noise.sigma = t.at("noise").at("sigma").get<double>();
    p.noise.outlier_prob = t.at("noise").at("outlier_prob").get<double>();
    p.noise.outlier_sigma = t.at("noise").at("outlier_sigma").get<double>();
    p.sparsify_stride = t.at("sparsify_stride").get<int>();
    const auto& lv = t.at("motion").at("linear_velocity");
    const auto& av = t.at("motion").at("angular_velocity");
    p.motion.linear_velocity = Eigen::Vector3d(lv[0].get<double>(), lv[1].get<double>(),
                                               lv[2].get<double>());
    p.motion.angular_velocity = Eigen::Vector3d(av[0].get<double>(), av[1].get<double>(),
                                                av[2].get<double>());
    p.motion.use_imu = t.at("motion").at("use_imu").get<bool>();
    config.tiers[tier] = p;
  }
  validate_scenario(config);
  return config;
}

}  // namespace scanstress
