#pragma once

#include <optional>
#include <variant>

#include "deadeye/core/vec.hpp"

namespace deadeye {

struct Sphere {
  Vec3 center;
  double radius = 0.0;
};

/// Oriented box; `rotation` maps world directions into the box frame.
struct Box {
  Vec3 center;
  Vec3 half_extents;
  Mat3 rotation;
};

struct Cylinder {
  Vec3 center;
  Vec3 axis{0.0, 1.0, 0.0};  // unit
  double radius = 0.0;
  double half_height = 0.0;
};

using Solid = std::variant<Sphere, Box, Cylinder>;

/// Parametric interval [enter, exit] where the line origin + t*dir is inside.
struct Interval {
  double enter = 0.0;
  double exit = 0.0;
};

std::optional<Interval> intersect(const Solid& solid, const Vec3& origin, const Vec3& dir);

bool contains(const Solid& solid, const Vec3& p);

/// True if the open segment (from, to) passes through the solid, ignoring a
/// relative margin at both endpoints.
bool blocks_segment(const Solid& solid, const Vec3& from, const Vec3& to, double margin = 1e-9);

}  // namespace deadeye
