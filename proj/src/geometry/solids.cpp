#include "deadeye/geometry/solids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deadeye {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Clips [lo, hi] by the slab |o + t d| <= h along one axis.
bool clip_slab(double o, double d, double h, double& lo, double& hi) {
  if (d == 0.0) return std::abs(o) <= h;
  double t0 = (-h - o) / d;
  double t1 = (h - o) / d;
  if (t0 > t1) std::swap(t0, t1);
  lo = std::max(lo, t0);
  hi = std::min(hi, t1);
  return lo <= hi;
}

std::optional<Interval> hit(const Sphere& s, const Vec3& origin, const Vec3& dir) {
  const Vec3 oc = origin - s.center;
  const double a = dot(dir, dir);
  const double b = dot(oc, dir);
  const double c = dot(oc, oc) - s.radius * s.radius;
  const double disc = b * b - a * c;
  if (a == 0.0 || disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  return Interval{(-b - root) / a, (-b + root) / a};
}

std::optional<Interval> hit(const Box& box, const Vec3& origin, const Vec3& dir) {
  const Vec3 o = box.rotation * (origin - box.center);
  const Vec3 d = box.rotation * dir;
  double lo = -kInf, hi = kInf;
  if (!clip_slab(o.x, d.x, box.half_extents.x, lo, hi)) return std::nullopt;
  if (!clip_slab(o.y, d.y, box.half_extents.y, lo, hi)) return std::nullopt;
  if (!clip_slab(o.z, d.z, box.half_extents.z, lo, hi)) return std::nullopt;
  return Interval{lo, hi};
}

std::optional<Interval> hit(const Cylinder& cyl, const Vec3& origin, const Vec3& dir) {
  const Vec3 oc = origin - cyl.center;
  const double oa = dot(oc, cyl.axis);
  const double da = dot(dir, cyl.axis);
  double lo = -kInf, hi = kInf;
  if (!clip_slab(oa, da, cyl.half_height, lo, hi)) return std::nullopt;
  const Vec3 o_perp = oc - cyl.axis * oa;
  const Vec3 d_perp = dir - cyl.axis * da;
  const double a = dot(d_perp, d_perp);
  const double b = dot(o_perp, d_perp);
  const double c = dot(o_perp, o_perp) - cyl.radius * cyl.radius;
  if (a == 0.0) {
    if (c > 0.0) return std::nullopt;
  } else {
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    lo = std::max(lo, (-b - root) / a);
    hi = std::min(hi, (-b + root) / a);
  }
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

}  // namespace

std::optional<Interval> intersect(const Solid& solid, const Vec3& origin, const Vec3& dir) {
  return std::visit([&](const auto& s) { return hit(s, origin, dir); }, solid);
}

bool contains(const Solid& solid, const Vec3& p) {
  struct Visitor {
    const Vec3& p;
    bool operator()(const Sphere& s) const {
      const Vec3 d = p - s.center;
      return dot(d, d) <= s.radius * s.radius;
    }
    bool operator()(const Box& b) const {
      const Vec3 l = b.rotation * (p - b.center);
      return std::abs(l.x) <= b.half_extents.x && std::abs(l.y) <= b.half_extents.y &&
             std::abs(l.z) <= b.half_extents.z;
    }
    bool operator()(const Cylinder& c) const {
      const Vec3 d = p - c.center;
      const double along = dot(d, c.axis);
      const Vec3 perp = d - c.axis * along;
      return std::abs(along) <= c.half_height && dot(perp, perp) <= c.radius * c.radius;
    }
  };
  return std::visit(Visitor{p}, solid);
}

bool blocks_segment(const Solid& solid, const Vec3& from, const Vec3& to, double margin) {
  const auto span = intersect(solid, from, to - from);
  if (!span) return false;
  const double lo = std::max(span->enter, margin);
  const double hi = std::min(span->exit, 1.0 - margin);
  return lo < hi;
}

}  // namespace deadeye
