#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "deadeye/core/image.hpp"
#include "deadeye/geometry/solids.hpp"
#include "deadeye/geometry/stereo.hpp"
#include "deadeye/simd/kernels.hpp"

namespace deadeye {

struct RasterTriangle {
  Vec3 v[3];  // world space, counter-clockwise seen from outside
  std::uint32_t color = 0;  // packed 0x00BBGGRR
  std::int32_t id = -1;
};

constexpr std::uint32_t pack_rgb(Rgb8 c) {
  return static_cast<std::uint32_t>(c.r) | (static_cast<std::uint32_t>(c.g) << 8) |
         (static_cast<std::uint32_t>(c.b) << 16);
}
constexpr Rgb8 unpack_rgb(std::uint32_t v) {
  return {static_cast<std::uint8_t>(v & 0xff), static_cast<std::uint8_t>((v >> 8) & 0xff),
          static_cast<std::uint8_t>((v >> 16) & 0xff)};
}

/// Color, inverse-depth and object-id planes of one eye's render target.
struct Framebuffer {
  int width = 0;
  int height = 0;
  std::vector<float> depth;  // 1 / view depth, 0 = empty
  std::vector<std::uint32_t> color;
  std::vector<std::int32_t> id;  // -1 = background

  Framebuffer(int w, int h, Rgb8 background = {});
  RgbImage to_image() const;
};

/// Half-open pixel rectangle.
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  long long area() const { return empty() ? 0 : static_cast<long long>(x1 - x0) * (y1 - y0); }
};

struct RasterOptions {
  unsigned threads = 1;
  int tile_size = 32;
  std::optional<PixelRect> scissor;
  std::optional<simd::Isa> isa;  // default: runtime choice
};

/// Depth-buffered flat rasterization. Vertices are snapped to 1/256 pixel,
/// coverage follows the top-left rule and depth ties keep the earlier
/// triangle, so the result depends only on triangle order, never on the
/// tile schedule or thread count.
void rasterize(const EyeView& view, std::span<const RasterTriangle> triangles, Framebuffer& target,
               const RasterOptions& options = {});

/// Conservative screen bounds of a set of triangles (after near clipping),
/// clamped to the image. Empty if nothing is in front of the eye.
PixelRect screen_bounds(const EyeView& view, std::span<const RasterTriangle> triangles);

/// Closed triangle mesh approximating a convex solid, outward winding.
std::vector<std::array<Vec3, 3>> tessellate(const Solid& solid);

}  // namespace deadeye
