#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deadeye/core/image.hpp"
#include "deadeye/core/vec.hpp"
#include "deadeye/geometry/solids.hpp"

namespace deadeye {

enum class SetKind { exp1_4, exp1_16, exp1_30, depth2, depth2_color_shape, depth3_color };
enum class Shape { cube, sphere, cylinder };
enum class Highlight { deadeye_left, deadeye_right, color_popout, flicker, none };

const char* to_string(SetKind kind);
const char* to_string(Shape shape);
const char* to_string(Highlight highlight);
SetKind set_kind_from_string(const std::string& text);
Shape shape_from_string(const std::string& text);
Highlight highlight_from_string(const std::string& text);

inline constexpr SetKind kAllSetKinds[] = {SetKind::exp1_4, SetKind::exp1_16, SetKind::exp1_30,
                                           SetKind::depth2, SetKind::depth2_color_shape, SetKind::depth3_color};

int object_count_for(SetKind kind);
int depth_planes_for(SetKind kind);

/// Parameters of one trial set. Defaults reproduce the study apparatus.
struct SetConfig {
  SetKind set_kind = SetKind::exp1_30;
  int scenes_per_set = 48;
  int training_scenes = 20;
  double target_fraction = 0.5;
  int exposure_ms = 250;
  int crosshair_ms = 2500;
  int pause_s = 30;
  int grid_rows = 5;
  int grid_cols = 6;
  double cube_angular_size_deg = 1.8;
  double grid_half_angle_h_deg = 14.93;
  double grid_half_angle_v_deg = 12.23;
  int depth_plane_count = 1;
  double plane_separation = 2.0;  // in reference cube sides
  double max_occlusion = 0.10;
  double max_occlusion_far = 0.20;  // furthest plane when three planes are used
  double jitter_amplitude = 0.20;   // fraction of cell pitch, per axis
  double depth_jitter_amplitude = 0.10;  // fraction of plane separation
  std::uint64_t rng_seed = 1;
  /// Technique applied to target trials.
  Highlight technique = Highlight::deadeye_right;
  /// Distance of the nearest plane; sets the absolute scale.
  double layout_distance = 2.0;
  int occlusion_resolution = 512;
  int max_retries = 1000;

  /// Default configuration for a set kind (plane count and occlusion cap).
  static SetConfig for_kind(SetKind kind, std::uint64_t seed = 1);

  int target_count() const;
  /// Throws configuration errors for broken invariants.
  void check() const;
  bool operator==(const SetConfig&) const = default;
};

struct GridCell {
  int row = 0;
  int col = 0;
  bool operator==(const GridCell&) const = default;
};

struct SceneObject {
  Shape shape = Shape::cube;
  Rgb8 color;
  GridCell grid_cell;
  Vec3 jitter_offset;  // x, y in cell pitches; z in plane separations
  int depth_plane = 0;
  Vec3 center;         // world position
  double size = 0.0;   // cube side / sphere and cylinder diameter

  bool operator==(const SceneObject&) const = default;
};

Solid to_solid(const SceneObject& object);

struct TrialScene {
  std::string scene_id;
  SetKind set_kind = SetKind::exp1_30;
  std::vector<SceneObject> objects;
  std::optional<std::size_t> target_index;
  Highlight highlight = Highlight::none;
  std::uint64_t seed = 0;

  bool has_target() const { return target_index.has_value(); }
  /// The same scene with the target object removed from the object list.
  TrialScene without_target() const;
  bool operator==(const TrialScene&) const = default;
};

/// Grid geometry in the canonical viewing frame: head at the origin, looking
/// down -z with +y up. Every depth plane scales its grid so cell centers keep
/// their visual angles from the focus point.
class Layout {
 public:
  explicit Layout(const SetConfig& config);

  double reference_side() const { return reference_side_; }
  double plane_depth(int plane) const;
  double pitch_x(int plane) const;
  double pitch_y(int plane) const;
  Vec3 cell_center(GridCell cell, int plane) const;
  /// Expected angular offset of a cell center from the focus axis (degrees).
  double cell_angle_h(int col) const;
  double cell_angle_v(int row) const;
  Vec3 object_center(GridCell cell, int plane, const Vec3& jitter) const;
  /// Side length that subtends the configured angular size at `center`.
  double object_size_at(const Vec3& center) const;
  /// Inverse of object_center: the cell center an object was jittered from.
  Vec3 unjittered_center(const SceneObject& object) const;

 private:
  SetConfig config_;
  double reference_side_;
};

inline constexpr int kPaletteSize = 8;
Rgb8 palette_color(int index);
inline constexpr Rgb8 kHomogeneousColor{60, 110, 230};
inline constexpr Rgb8 kPopoutColor{230, 40, 40};

}  // namespace deadeye
