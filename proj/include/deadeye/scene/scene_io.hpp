#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deadeye/scene/scene.hpp"

namespace deadeye {

/// A serialized scene set: the generating config plus the scenes in
/// presentation order.
struct SceneSet {
  SetConfig config;
  std::vector<TrialScene> scenes;

  bool operator==(const SceneSet&) const = default;
};

inline constexpr int kSceneFormatVersion = 1;

// JSON document:
//   {"format": "deadeye-scene-set", "format_version": 1,
//    "config": {...SetConfig fields...},
//    "scenes": [{"scene_id", "set_kind", "seed", "highlight", "target_index",
//                "objects": [{"shape", "color": [r,g,b], "grid_cell": [row,col],
//                             "jitter_offset": [x,y,z], "depth_plane",
//                             "center": [x,y,z], "size"}]}]}
// Seeds are written as decimal strings so 64-bit values survive readers that
// parse numbers as doubles.
std::string scene_set_to_json(const SceneSet& set);
SceneSet scene_set_from_json(const std::string& text);

void save_scene_set(const std::filesystem::path& path, const SceneSet& set);
SceneSet load_scene_set(const std::filesystem::path& path);

}  // namespace deadeye
