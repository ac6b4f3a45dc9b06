#include "deadeye/scene/scene_io.hpp"

#include <json.hpp>

#include "deadeye/core/error.hpp"

namespace deadeye {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "deadeye-scene-set";

json vec3(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::format, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::uint64_t seed_from(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const std::string text = j.get<std::string>();
  std::size_t used = 0;
  const unsigned long long v = std::stoull(text, &used);
  if (used != text.size()) throw Error(ErrorKind::format, "bad seed '" + text + "'");
  return v;
}

json config_json(const SetConfig& c) {
  return {{"set_kind", to_string(c.set_kind)},
          {"scenes_per_set", c.scenes_per_set},
          {"training_scenes", c.training_scenes},
          {"target_fraction", c.target_fraction},
          {"exposure_ms", c.exposure_ms},
          {"crosshair_ms", c.crosshair_ms},
          {"pause_s", c.pause_s},
          {"grid_rows", c.grid_rows},
          {"grid_cols", c.grid_cols},
          {"cube_angular_size_deg", c.cube_angular_size_deg},
          {"grid_half_angle_h_deg", c.grid_half_angle_h_deg},
          {"grid_half_angle_v_deg", c.grid_half_angle_v_deg},
          {"depth_plane_count", c.depth_plane_count},
          {"plane_separation", c.plane_separation},
          {"max_occlusion", c.max_occlusion},
          {"max_occlusion_far", c.max_occlusion_far},
          {"jitter_amplitude", c.jitter_amplitude},
          {"depth_jitter_amplitude", c.depth_jitter_amplitude},
          {"rng_seed", std::to_string(c.rng_seed)},
          {"technique", to_string(c.technique)},
          {"layout_distance", c.layout_distance},
          {"occlusion_resolution", c.occlusion_resolution},
          {"max_retries", c.max_retries}};
}

SetConfig config_from(const json& j) {
  SetConfig c;
  c.set_kind = set_kind_from_string(j.at("set_kind").get<std::string>());
  c.scenes_per_set = j.at("scenes_per_set").get<int>();
  c.training_scenes = j.at("training_scenes").get<int>();
  c.target_fraction = j.at("target_fraction").get<double>();
  c.exposure_ms = j.at("exposure_ms").get<int>();
  c.crosshair_ms = j.at("crosshair_ms").get<int>();
  c.pause_s = j.at("pause_s").get<int>();
  c.grid_rows = j.at("grid_rows").get<int>();
  c.grid_cols = j.at("grid_cols").get<int>();
  c.cube_angular_size_deg = j.at("cube_angular_size_deg").get<double>();
  c.grid_half_angle_h_deg = j.at("grid_half_angle_h_deg").get<double>();
  c.grid_half_angle_v_deg = j.at("grid_half_angle_v_deg").get<double>();
  c.depth_plane_count = j.at("depth_plane_count").get<int>();
  c.plane_separation = j.at("plane_separation").get<double>();
  c.max_occlusion = j.at("max_occlusion").get<double>();
  c.max_occlusion_far = j.at("max_occlusion_far").get<double>();
  c.jitter_amplitude = j.at("jitter_amplitude").get<double>();
  c.depth_jitter_amplitude = j.at("depth_jitter_amplitude").get<double>();
  c.rng_seed = seed_from(j.at("rng_seed"));
  c.technique = highlight_from_string(j.at("technique").get<std::string>());
  c.layout_distance = j.at("layout_distance").get<double>();
  c.occlusion_resolution = j.at("occlusion_resolution").get<int>();
  c.max_retries = j.at("max_retries").get<int>();
  return c;
}

json object_json(const SceneObject& o) {
  return {{"shape", to_string(o.shape)},
          {"color", json::array({o.color.r, o.color.g, o.color.b})},
          {"grid_cell", json::array({o.grid_cell.row, o.grid_cell.col})},
          {"jitter_offset", vec3(o.jitter_offset)},
          {"depth_plane", o.depth_plane},
          {"center", vec3(o.center)},
          {"size", o.size}};
}

SceneObject object_from(const json& j) {
  SceneObject o;
  o.shape = shape_from_string(j.at("shape").get<std::string>());
  const json& c = j.at("color");
  if (!c.is_array() || c.size() != 3) throw Error(ErrorKind::format, "color must be [r, g, b]");
  o.color = {c[0].get<std::uint8_t>(), c[1].get<std::uint8_t>(), c[2].get<std::uint8_t>()};
  const json& g = j.at("grid_cell");
  if (!g.is_array() || g.size() != 2) throw Error(ErrorKind::format, "grid_cell must be [row, col]");
  o.grid_cell = {g[0].get<int>(), g[1].get<int>()};
  o.jitter_offset = vec3(j.at("jitter_offset"));
  o.depth_plane = j.at("depth_plane").get<int>();
  o.center = vec3(j.at("center"));
  o.size = j.at("size").get<double>();
  return o;
}

json scene_json(const TrialScene& s) {
  json objects = json::array();
  for (const SceneObject& o : s.objects) objects.push_back(object_json(o));
  return {{"scene_id", s.scene_id},
          {"set_kind", to_string(s.set_kind)},
          {"seed", std::to_string(s.seed)},
          {"highlight", to_string(s.highlight)},
          {"target_index", s.target_index ? json(*s.target_index) : json(nullptr)},
          {"objects", std::move(objects)}};
}

TrialScene scene_from(const json& j) {
  TrialScene s;
  s.scene_id = j.at("scene_id").get<std::string>();
  s.set_kind = set_kind_from_string(j.at("set_kind").get<std::string>());
  s.seed = seed_from(j.at("seed"));
  s.highlight = highlight_from_string(j.at("highlight").get<std::string>());
  if (!j.at("target_index").is_null()) s.target_index = j.at("target_index").get<std::size_t>();
  for (const json& o : j.at("objects")) s.objects.push_back(object_from(o));
  return s;
}

}  // namespace

std::string scene_set_to_json(const SceneSet& set) {
  json scenes = json::array();
  for (const TrialScene& s : set.scenes) scenes.push_back(scene_json(s));
  const json doc = {{"format", kFormatName},
                    {"format_version", kSceneFormatVersion},
                    {"config", config_json(set.config)},
                    {"scenes", std::move(scenes)}};
  return doc.dump(1) + "\n";
}

SceneSet scene_set_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormatName) throw Error(ErrorKind::format, "not a scene set");
    const int version = doc.at("format_version").get<int>();
    if (version != kSceneFormatVersion) {
      throw Error(ErrorKind::format, "unsupported scene set format_version " + std::to_string(version));
    }
    SceneSet set;
    set.config = config_from(doc.at("config"));
    for (const json& s : doc.at("scenes")) set.scenes.push_back(scene_from(s));
    return set;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("scene set: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorKind::format, std::string("scene set: ") + e.what());
  }
}

void save_scene_set(const std::filesystem::path& path, const SceneSet& set) {
  write_file(path, scene_set_to_json(set));
}

SceneSet load_scene_set(const std::filesystem::path& path) { return scene_set_from_json(read_file(path)); }

}  // namespace deadeye
