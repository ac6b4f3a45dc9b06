#pragma once

#include <optional>
#include <string>
#include <utility>

#include "deadeye/core/vec.hpp"

namespace deadeye {

enum class Eye { left, right };

const char* to_string(Eye eye);
Eye eye_from_string(const std::string& text);
inline Eye other_eye(Eye e) { return e == Eye::left ? Eye::right : Eye::left; }

struct ImageSize {
  int width = 512;
  int height = 512;
  bool operator==(const ImageSize&) const = default;
};

/// Interpupillary geometry of a viewer. Units are whatever the scene uses
/// (meters for search scenes, millimeters for volumes).
struct StereoRig {
  double eye_separation = 0.063;
  Vec3 head_position{0.0, 0.0, 0.0};
  Vec3 forward{0.0, 0.0, -1.0};
  Vec3 up{0.0, 1.0, 0.0};
  double near_plane = 0.05;
  double far_plane = 100.0;
  double vertical_fov_deg = 50.0;
  /// Distance of the zero-parallax plane; empty means parallel frusta.
  std::optional<double> convergence_distance;
};

/// Orthonormal rig frame derived from forward/up.
struct RigFrame {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
};

RigFrame rig_frame(const StereoRig& rig);

struct Frustum {
  double left = 0.0;
  double right = 0.0;
  double bottom = 0.0;
  double top = 0.0;
  double near_plane = 0.0;
  double far_plane = 0.0;
  bool operator==(const Frustum&) const = default;
};

struct Ray {
  Vec3 origin;
  Vec3 direction;
};

struct ScreenPoint {
  double x = 0.0;  // pixels, origin top-left
  double y = 0.0;
  double depth = 0.0;  // distance along the eye's view axis
};

/// One eye's camera. The eye frame has x right, y up and z along the view
/// direction, so visible points have positive z.
struct EyeView {
  Eye eye = Eye::left;
  RigidTransform view;
  Frustum projection;
  ImageSize image;

  Vec3 position() const { return view.origin; }
  Vec3 to_eye(const Vec3& world) const { return view.apply(world); }

  /// Maps an eye-space point with z > 0 to pixel coordinates.
  ScreenPoint project_eye(const Vec3& p) const;
  ScreenPoint project(const Vec3& world) const { return project_eye(to_eye(world)); }

  /// World-space ray through the given (sub)pixel position.
  Ray pixel_ray(double px, double py) const;

  bool operator==(const EyeView&) const = default;
};

/// Left and right cameras of a rig. Throws configuration errors for a
/// degenerate basis or invalid planes.
std::pair<EyeView, EyeView> derive_eye_views(const StereoRig& rig, ImageSize image);
EyeView derive_eye_view(const StereoRig& rig, ImageSize image, Eye eye);

/// Full visual angle in degrees subtended by an extent seen at a distance.
double angular_size(double object_extent, double distance);

/// Viewing distance at which the outermost column centers of a grid of the
/// given width (center to center) sit at half_angle_deg from the focus point.
double solve_layout_distance(double grid_width, double half_angle_deg);

/// Horizontal and vertical angle (degrees) of a point from the rig's focus
/// axis, measured at the head position.
struct AngularOffset {
  double horizontal = 0.0;
  double vertical = 0.0;
};
AngularOffset angular_offset(const StereoRig& rig, const Vec3& world);

}  // namespace deadeye
