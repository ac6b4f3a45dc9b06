#include "deadeye/geometry/stereo.hpp"

#include <cmath>

#include "deadeye/core/error.hpp"

namespace deadeye {

const char* to_string(Eye eye) { return eye == Eye::left ? "left" : "right"; }

Eye eye_from_string(const std::string& text) {
  if (text == "left") return Eye::left;
  if (text == "right") return Eye::right;
  throw Error(ErrorKind::format, "unknown eye '" + text + "'");
}

RigFrame rig_frame(const StereoRig& rig) {
  const Vec3 f = normalize(rig.forward);
  const Vec3 side = cross(f, rig.up);
  if (length(rig.forward) == 0.0 || length(side) < 1e-12 * length(rig.up)) {
    throw Error(ErrorKind::configuration, "forward and up vectors are degenerate or parallel");
  }
  const Vec3 r = normalize(side);
  return {r, cross(r, f), f};
}

ScreenPoint EyeView::project_eye(const Vec3& p) const {
  const Frustum& f = projection;
  const double xn = f.near_plane * p.x / p.z;
  const double yn = f.near_plane * p.y / p.z;
  return {(xn - f.left) / (f.right - f.left) * image.width, (f.top - yn) / (f.top - f.bottom) * image.height, p.z};
}

Ray EyeView::pixel_ray(double px, double py) const {
  const Frustum& f = projection;
  const Vec3 local{f.left + (px / image.width) * (f.right - f.left), f.top - (py / image.height) * (f.top - f.bottom),
                   f.near_plane};
  return {view.origin, normalize(view.inverse_apply_direction(local))};
}

EyeView derive_eye_view(const StereoRig& rig, ImageSize image, Eye eye) {
  if (image.width <= 0 || image.height <= 0) throw Error(ErrorKind::domain, "image size must be positive");
  if (!(rig.eye_separation >= 0.0)) throw Error(ErrorKind::configuration, "eye separation must be non-negative");
  if (!(rig.near_plane > 0.0) || !(rig.far_plane > rig.near_plane)) {
    throw Error(ErrorKind::configuration, "clip planes must satisfy 0 < near < far");
  }
  if (!(rig.vertical_fov_deg > 0.0 && rig.vertical_fov_deg < 180.0)) {
    throw Error(ErrorKind::configuration, "vertical field of view must be in (0, 180) degrees");
  }
  if (rig.convergence_distance && !(*rig.convergence_distance > 0.0)) {
    throw Error(ErrorKind::configuration, "convergence distance must be positive");
  }
  const RigFrame frame = rig_frame(rig);
  const double half = 0.5 * rig.eye_separation;
  const double sign = eye == Eye::left ? -1.0 : 1.0;

  EyeView v;
  v.eye = eye;
  v.image = image;
  v.view.rotation = Mat3::from_rows(frame.right, frame.up, frame.forward);
  v.view.origin = rig.head_position + frame.right * (sign * half);

  const double top = rig.near_plane * std::tan(deg_to_rad(0.5 * rig.vertical_fov_deg));
  const double right = top * static_cast<double>(image.width) / image.height;
  // Off-axis shift that makes both frustum centers meet at the convergence distance.
  const double shift = rig.convergence_distance ? -sign * half * rig.near_plane / *rig.convergence_distance : 0.0;
  v.projection = {-right + shift, right + shift, -top, top, rig.near_plane, rig.far_plane};
  return v;
}

std::pair<EyeView, EyeView> derive_eye_views(const StereoRig& rig, ImageSize image) {
  return {derive_eye_view(rig, image, Eye::left), derive_eye_view(rig, image, Eye::right)};
}

double angular_size(double object_extent, double distance) {
  if (!(distance > 0.0)) throw Error(ErrorKind::domain, "distance must be positive");
  if (!(object_extent >= 0.0)) throw Error(ErrorKind::domain, "extent must be non-negative");
  return rad_to_deg(2.0 * std::atan(object_extent / (2.0 * distance)));
}

double solve_layout_distance(double grid_width, double half_angle_deg) {
  if (!(grid_width > 0.0)) throw Error(ErrorKind::domain, "grid width must be positive");
  if (!(half_angle_deg > 0.0 && half_angle_deg < 90.0)) {
    throw Error(ErrorKind::domain, "half angle must be in (0, 90) degrees");
  }
  return 0.5 * grid_width / std::tan(deg_to_rad(half_angle_deg));
}

AngularOffset angular_offset(const StereoRig& rig, const Vec3& world) {
  const RigFrame frame = rig_frame(rig);
  const Vec3 d = world - rig.head_position;
  const double z = dot(d, frame.forward);
  return {rad_to_deg(std::atan2(dot(d, frame.right), z)), rad_to_deg(std::atan2(dot(d, frame.up), z))};
}

}  // namespace deadeye
