#include <cmath>

#include "deadeye/render/raster.hpp"

namespace deadeye {

namespace {

constexpr int kSphereSlices = 20;
constexpr int kSphereStacks = 12;
constexpr int kCylinderSegments = 24;

using Tri = std::array<Vec3, 3>;

// Appends a triangle, flipping it if needed so it winds outward from `inside`.
void emit(std::vector<Tri>& out, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& inside) {
  const Vec3 n = cross(b - a, c - a);
  if (dot(n, n) == 0.0) return;
  if (dot(n, (a + b + c) / 3.0 - inside) < 0.0) {
    out.push_back({a, c, b});
  } else {
    out.push_back({a, b, c});
  }
}

void emit_quad(std::vector<Tri>& out, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& inside) {
  emit(out, a, b, c, inside);
  emit(out, a, c, d, inside);
}

std::vector<Tri> mesh(const Box& box) {
  const Mat3 to_world = box.rotation.transposed();
  const Vec3 h = box.half_extents;
  auto corner = [&](int sx, int sy, int sz) { return box.center + to_world * Vec3{sx * h.x, sy * h.y, sz * h.z}; };
  std::vector<Tri> out;
  const Vec3& c = box.center;
  emit_quad(out, corner(-1, -1, 1), corner(1, -1, 1), corner(1, 1, 1), corner(-1, 1, 1), c);
  emit_quad(out, corner(1, -1, -1), corner(-1, -1, -1), corner(-1, 1, -1), corner(1, 1, -1), c);
  emit_quad(out, corner(1, -1, 1), corner(1, -1, -1), corner(1, 1, -1), corner(1, 1, 1), c);
  emit_quad(out, corner(-1, -1, -1), corner(-1, -1, 1), corner(-1, 1, 1), corner(-1, 1, -1), c);
  emit_quad(out, corner(-1, 1, 1), corner(1, 1, 1), corner(1, 1, -1), corner(-1, 1, -1), c);
  emit_quad(out, corner(-1, -1, -1), corner(1, -1, -1), corner(1, -1, 1), corner(-1, -1, 1), c);
  return out;
}

std::vector<Tri> mesh(const Sphere& s) {
  auto point = [&](int stack, int slice) {
    const double theta = kPi * stack / kSphereStacks;
    const double phi = 2.0 * kPi * slice / kSphereSlices;
    return s.center + Vec3{std::sin(theta) * std::cos(phi), std::cos(theta), std::sin(theta) * std::sin(phi)} * s.radius;
  };
  std::vector<Tri> out;
  for (int i = 0; i < kSphereStacks; ++i) {
    for (int j = 0; j < kSphereSlices; ++j) {
      emit_quad(out, point(i, j), point(i + 1, j), point(i + 1, j + 1), point(i, j + 1), s.center);
    }
  }
  return out;
}

std::vector<Tri> mesh(const Cylinder& c) {
  // Any unit vector not parallel to the axis seeds the radial basis.
  const Vec3 seed = std::abs(c.axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 0, 1};
  const Vec3 u = normalize(cross(c.axis, seed));
  const Vec3 v = cross(c.axis, u);
  const Vec3 top = c.center + c.axis * c.half_height;
  const Vec3 bottom = c.center - c.axis * c.half_height;
  auto rim = [&](const Vec3& base, int k) {
    const double phi = 2.0 * kPi * k / kCylinderSegments;
    return base + (u * std::cos(phi) + v * std::sin(phi)) * c.radius;
  };
  std::vector<Tri> out;
  for (int k = 0; k < kCylinderSegments; ++k) {
    emit_quad(out, rim(bottom, k), rim(bottom, k + 1), rim(top, k + 1), rim(top, k), c.center);
    emit(out, top, rim(top, k), rim(top, k + 1), c.center);
    emit(out, bottom, rim(bottom, k + 1), rim(bottom, k), c.center);
  }
  return out;
}

}  // namespace

std::vector<std::array<Vec3, 3>> tessellate(const Solid& solid) {
  return std::visit([](const auto& s) { return mesh(s); }, solid);
}

}  // namespace deadeye
