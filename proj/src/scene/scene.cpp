#include "deadeye/scene/scene.hpp"

#include <cmath>

#include "deadeye/core/error.hpp"

namespace deadeye {

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::exp1_4: return "exp1_4";
    case SetKind::exp1_16: return "exp1_16";
    case SetKind::exp1_30: return "exp1_30";
    case SetKind::depth2: return "depth2";
    case SetKind::depth2_color_shape: return "depth2_color_shape";
    case SetKind::depth3_color: return "depth3_color";
  }
  return "unknown";
}

const char* to_string(Shape shape) {
  switch (shape) {
    case Shape::cube: return "cube";
    case Shape::sphere: return "sphere";
    case Shape::cylinder: return "cylinder";
  }
  return "unknown";
}

const char* to_string(Highlight highlight) {
  switch (highlight) {
    case Highlight::deadeye_left: return "deadeye_left";
    case Highlight::deadeye_right: return "deadeye_right";
    case Highlight::color_popout: return "color_popout";
    case Highlight::flicker: return "flicker";
    case Highlight::none: return "none";
  }
  return "unknown";
}

SetKind set_kind_from_string(const std::string& text) {
  for (SetKind k : kAllSetKinds) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorKind::format, "unknown set kind '" + text + "'");
}

Shape shape_from_string(const std::string& text) {
  for (Shape s : {Shape::cube, Shape::sphere, Shape::cylinder}) {
    if (text == to_string(s)) return s;
  }
  throw Error(ErrorKind::format, "unknown shape '" + text + "'");
}

Highlight highlight_from_string(const std::string& text) {
  for (Highlight h : {Highlight::deadeye_left, Highlight::deadeye_right, Highlight::color_popout, Highlight::flicker,
                      Highlight::none}) {
    if (text == to_string(h)) return h;
  }
  throw Error(ErrorKind::format, "unknown highlight '" + text + "'");
}

int object_count_for(SetKind kind) {
  switch (kind) {
    case SetKind::exp1_4: return 4;
    case SetKind::exp1_16: return 16;
    default: return 30;
  }
}

int depth_planes_for(SetKind kind) {
  switch (kind) {
    case SetKind::depth2:
    case SetKind::depth2_color_shape: return 2;
    case SetKind::depth3_color: return 3;
    default: return 1;
  }
}

SetConfig SetConfig::for_kind(SetKind kind, std::uint64_t seed) {
  SetConfig c;
  c.set_kind = kind;
  c.depth_plane_count = depth_planes_for(kind);
  c.rng_seed = seed;
  return c;
}

int SetConfig::target_count() const { return static_cast<int>(std::lround(scenes_per_set * target_fraction)); }

void SetConfig::check() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::configuration, what); };
  if (scenes_per_set <= 0) fail("scenes_per_set must be positive");
  if (!(target_fraction >= 0.0 && target_fraction <= 1.0)) fail("target_fraction must be in [0, 1]");
  const double targets = scenes_per_set * target_fraction;
  if (std::abs(targets - std::round(targets)) > 1e-9) fail("scenes_per_set * target_fraction must be an integer");
  if (depth_plane_count != depth_planes_for(set_kind)) {
    fail(std::string("depth_plane_count does not match set kind ") + to_string(set_kind));
  }
  if (grid_rows < 2 || grid_cols < 2) fail("grid needs at least 2 rows and 2 columns");
  if (object_count_for(set_kind) > grid_rows * grid_cols) fail("more objects than grid cells");
  if (!(max_occlusion >= 0.0 && max_occlusion < 1.0)) fail("max_occlusion must be in [0, 1)");
  if (!(max_occlusion_far >= 0.0 && max_occlusion_far < 1.0)) fail("max_occlusion_far must be in [0, 1)");
  if (!(jitter_amplitude >= 0.0 && jitter_amplitude < 0.5)) fail("jitter_amplitude must be in [0, 0.5)");
  if (!(depth_jitter_amplitude >= 0.0 && depth_jitter_amplitude < 0.5)) fail("depth_jitter_amplitude must be in [0, 0.5)");
  if (!(cube_angular_size_deg > 0.0 && cube_angular_size_deg < 90.0)) fail("cube angular size out of range");
  if (!(grid_half_angle_h_deg > 0.0 && grid_half_angle_h_deg < 90.0)) fail("horizontal grid angle out of range");
  if (!(grid_half_angle_v_deg > 0.0 && grid_half_angle_v_deg < 90.0)) fail("vertical grid angle out of range");
  if (!(plane_separation > 0.0)) fail("plane_separation must be positive");
  if (!(layout_distance > 0.0)) fail("layout_distance must be positive");
  if (exposure_ms <= 0 || crosshair_ms <= 0 || pause_s < 0) fail("phase durations must be positive");
  if (occlusion_resolution < 16) fail("occlusion_resolution too small");
  if (max_retries < 1) fail("max_retries must be at least 1");
}

Solid to_solid(const SceneObject& object) {
  const double h = 0.5 * object.size;
  switch (object.shape) {
    case Shape::sphere: return Sphere{object.center, h};
    case Shape::cylinder: return Cylinder{object.center, {0.0, 1.0, 0.0}, h, h};
    case Shape::cube: break;
  }
  return Box{object.center, {h, h, h}, Mat3{}};
}

TrialScene TrialScene::without_target() const {
  TrialScene copy = *this;
  if (target_index) {
    copy.objects.erase(copy.objects.begin() + static_cast<std::ptrdiff_t>(*target_index));
    copy.target_index.reset();
    copy.highlight = Highlight::none;
  }
  return copy;
}

Layout::Layout(const SetConfig& config)
    : config_(config),
      reference_side_(2.0 * config.layout_distance * std::tan(deg_to_rad(0.5 * config.cube_angular_size_deg))) {}

double Layout::plane_depth(int plane) const {
  return config_.layout_distance + plane * config_.plane_separation * reference_side_;
}

double Layout::pitch_x(int plane) const {
  return 2.0 * plane_depth(plane) * std::tan(deg_to_rad(config_.grid_half_angle_h_deg)) / (config_.grid_cols - 1);
}

double Layout::pitch_y(int plane) const {
  return 2.0 * plane_depth(plane) * std::tan(deg_to_rad(config_.grid_half_angle_v_deg)) / (config_.grid_rows - 1);
}

Vec3 Layout::cell_center(GridCell cell, int plane) const {
  const double cx = cell.col - 0.5 * (config_.grid_cols - 1);
  const double cy = 0.5 * (config_.grid_rows - 1) - cell.row;
  return {cx * pitch_x(plane), cy * pitch_y(plane), -plane_depth(plane)};
}

double Layout::cell_angle_h(int col) const {
  const double frac = (col - 0.5 * (config_.grid_cols - 1)) / (0.5 * (config_.grid_cols - 1));
  return rad_to_deg(std::atan(frac * std::tan(deg_to_rad(config_.grid_half_angle_h_deg))));
}

double Layout::cell_angle_v(int row) const {
  const double frac = (0.5 * (config_.grid_rows - 1) - row) / (0.5 * (config_.grid_rows - 1));
  return rad_to_deg(std::atan(frac * std::tan(deg_to_rad(config_.grid_half_angle_v_deg))));
}

Vec3 Layout::object_center(GridCell cell, int plane, const Vec3& jitter) const {
  const Vec3 base = cell_center(cell, plane);
  return {base.x + jitter.x * pitch_x(plane), base.y + jitter.y * pitch_y(plane),
          base.z - jitter.z * config_.plane_separation * reference_side_};
}

double Layout::object_size_at(const Vec3& center) const {
  return 2.0 * length(center) * std::tan(deg_to_rad(0.5 * config_.cube_angular_size_deg));
}

Vec3 Layout::unjittered_center(const SceneObject& object) const {
  const int plane = object.depth_plane;
  return {object.center.x - object.jitter_offset.x * pitch_x(plane),
          object.center.y - object.jitter_offset.y * pitch_y(plane),
          object.center.z + object.jitter_offset.z * config_.plane_separation * reference_side_};
}

Rgb8 palette_color(int index) {
  // Eight hues 45 degrees apart at saturation 0.8, value 0.9.
  const double h = (index % kPaletteSize) * 45.0 / 60.0;
  const double v = 0.9, s = 0.8;
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  auto q = [m](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255.0)); };
  return {q(r), q(g), q(b)};
}

}  // namespace deadeye
