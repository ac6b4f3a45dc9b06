#include "deadeye/render/raster.hpp"

#include <algorithm>
#include <cmath>

#include "deadeye/core/error.hpp"
#include "deadeye/core/parallel.hpp"

namespace deadeye {

Framebuffer::Framebuffer(int w, int h, Rgb8 background) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw Error(ErrorKind::domain, "framebuffer size must be positive");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  depth.assign(n, 0.0f);
  color.assign(n, pack_rgb(background));
  id.assign(n, -1);
}

RgbImage Framebuffer::to_image() const {
  RgbImage image(width, height);
  for (std::size_t i = 0; i < color.size(); ++i) {
    const Rgb8 c = unpack_rgb(color[i]);
    image.pixels[3 * i] = c.r;
    image.pixels[3 * i + 1] = c.g;
    image.pixels[3 * i + 2] = c.b;
  }
  return image;
}

namespace {

constexpr double kSubpixel = 256.0;
// Keeps snapped coordinates small enough that edge functions stay exact.
constexpr double kGuard = 1 << 20;

struct ScreenVertex {
  double x, y, q;
};

struct SetupTriangle {
  simd::SpanSetup span;
  PixelRect bounds;
};

double snap(double v) { return std::nearbyint(std::clamp(v, -kGuard, kGuard) * kSubpixel) / kSubpixel; }

// Clips an eye-space triangle against z >= near; returns 0, 3 or 4 vertices.
int clip_near(const Vec3 (&in)[3], double near_plane, Vec3 (&out)[4]) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = in[i];
    const Vec3& b = in[(i + 1) % 3];
    const bool a_in = a.z >= near_plane;
    const bool b_in = b.z >= near_plane;
    if (a_in) out[n++] = a;
    if (a_in != b_in) {
      const double t = (near_plane - a.z) / (b.z - a.z);
      out[n++] = {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, near_plane};
    }
  }
  return n;
}

ScreenVertex to_screen(const EyeView& view, const Vec3& eye_space) {
  const ScreenPoint p = view.project_eye(eye_space);
  return {snap(p.x), snap(p.y), 1.0 / eye_space.z};
}

// Emits the span setup for a front-facing screen triangle; back faces and
// degenerate triangles are dropped.
bool setup(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2, const PixelRect& clip, std::uint32_t color,
           std::int32_t id, SetupTriangle& out) {
  double area = (v1.x - v0.x) * (v2.y - v0.y) - (v2.x - v0.x) * (v1.y - v0.y);
  // Counter-clockwise in the eye's y-up frame is clockwise in pixel rows.
  if (area >= 0.0) return false;
  std::swap(v1, v2);
  area = -area;

  const ScreenVertex vs[3] = {v0, v1, v2};
  for (int k = 0; k < 3; ++k) {
    const ScreenVertex& a = vs[k];
    const ScreenVertex& b = vs[(k + 1) % 3];
    const double ea = a.y - b.y;
    const double eb = b.x - a.x;
    out.span.a[k] = ea;
    out.span.b[k] = eb;
    out.span.c[k] = (b.y - a.y) * a.x - (b.x - a.x) * a.y;
    out.span.top_left[k] = ea > 0.0 || (ea == 0.0 && eb > 0.0);
  }
  out.span.qa = ((v1.q - v0.q) * (v2.y - v0.y) - (v2.q - v0.q) * (v1.y - v0.y)) / area;
  out.span.qb = ((v2.q - v0.q) * (v1.x - v0.x) - (v1.q - v0.q) * (v2.x - v0.x)) / area;
  out.span.qc = v0.q - out.span.qa * v0.x - out.span.qb * v0.y;
  out.span.color = color;
  out.span.id = id;

  const double minx = std::min({v0.x, v1.x, v2.x});
  const double maxx = std::max({v0.x, v1.x, v2.x});
  const double miny = std::min({v0.y, v1.y, v2.y});
  const double maxy = std::max({v0.y, v1.y, v2.y});
  out.bounds.x0 = std::max(clip.x0, static_cast<int>(std::floor(minx)));
  out.bounds.x1 = std::min(clip.x1, static_cast<int>(std::ceil(maxx)) + 1);
  out.bounds.y0 = std::max(clip.y0, static_cast<int>(std::floor(miny)));
  out.bounds.y1 = std::min(clip.y1, static_cast<int>(std::ceil(maxy)) + 1);
  return !out.bounds.empty();
}

template <class Emit>
void for_each_screen_triangle(const EyeView& view, const RasterTriangle& tri, Emit&& emit) {
  const Vec3 eye_space[3] = {view.to_eye(tri.v[0]), view.to_eye(tri.v[1]), view.to_eye(tri.v[2])};
  Vec3 poly[4];
  const int n = clip_near(eye_space, view.projection.near_plane, poly);
  if (n < 3) return;
  const ScreenVertex s0 = to_screen(view, poly[0]);
  for (int i = 1; i + 1 < n; ++i) emit(s0, to_screen(view, poly[i]), to_screen(view, poly[i + 1]));
}

}  // namespace

void rasterize(const EyeView& view, std::span<const RasterTriangle> triangles, Framebuffer& target,
               const RasterOptions& options) {
  if (target.width != view.image.width || target.height != view.image.height) {
    throw Error(ErrorKind::contract, "framebuffer size does not match the view's image size");
  }
  if (options.tile_size <= 0) throw Error(ErrorKind::configuration, "tile size must be positive");
  PixelRect clip{0, 0, target.width, target.height};
  if (options.scissor) {
    clip.x0 = std::max(clip.x0, options.scissor->x0);
    clip.y0 = std::max(clip.y0, options.scissor->y0);
    clip.x1 = std::min(clip.x1, options.scissor->x1);
    clip.y1 = std::min(clip.y1, options.scissor->y1);
  }
  if (clip.empty()) return;

  std::vector<SetupTriangle> setups;
  setups.reserve(triangles.size());
  for (const RasterTriangle& tri : triangles) {
    for_each_screen_triangle(view, tri, [&](ScreenVertex a, ScreenVertex b, ScreenVertex c) {
      SetupTriangle s;
      if (setup(a, b, c, clip, tri.color, tri.id, s)) setups.push_back(s);
    });
  }
  if (setups.empty()) return;

  const int ts = options.tile_size;
  const int tiles_x = (clip.x1 - clip.x0 + ts - 1) / ts;
  const int tiles_y = (clip.y1 - clip.y0 + ts - 1) / ts;
  std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (std::uint32_t i = 0; i < setups.size(); ++i) {
    const PixelRect& b = setups[i].bounds;
    const int tx0 = (b.x0 - clip.x0) / ts, tx1 = (b.x1 - 1 - clip.x0) / ts;
    const int ty0 = (b.y0 - clip.y0) / ts, ty1 = (b.y1 - 1 - clip.y0) / ts;
    for (int ty = ty0; ty <= ty1; ++ty) {
      for (int tx = tx0; tx <= tx1; ++tx) bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(i);
    }
  }

  const simd::RasterSpanFn span = simd::kernels(options.isa.value_or(simd::active_isa())).raster_span;
  parallel_for(bins.size(), options.threads, [&](std::size_t tile) {
    const auto& bin = bins[tile];
    if (bin.empty()) return;
    const int tx = static_cast<int>(tile % tiles_x);
    const int ty = static_cast<int>(tile / tiles_x);
    const int x0 = clip.x0 + tx * ts, x1 = std::min(clip.x1, x0 + ts);
    const int y0 = clip.y0 + ty * ts, y1 = std::min(clip.y1, y0 + ts);
    for (std::uint32_t index : bin) {
      const SetupTriangle& s = setups[index];
      const int sx0 = std::max(x0, s.bounds.x0), sx1 = std::min(x1, s.bounds.x1);
      const int sy0 = std::max(y0, s.bounds.y0), sy1 = std::min(y1, s.bounds.y1);
      for (int y = sy0; y < sy1; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * target.width;
        span(s.span, y, sx0, sx1, target.depth.data() + row, target.color.data() + row, target.id.data() + row);
      }
    }
  });
}

PixelRect screen_bounds(const EyeView& view, std::span<const RasterTriangle> triangles) {
  double minx = kGuard, miny = kGuard, maxx = -kGuard, maxy = -kGuard;
  bool any = false;
  for (const RasterTriangle& tri : triangles) {
    for_each_screen_triangle(view, tri, [&](ScreenVertex a, ScreenVertex b, ScreenVertex c) {
      for (const ScreenVertex& v : {a, b, c}) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
      }
      any = true;
    });
  }
  if (!any) return {};
  PixelRect r;
  r.x0 = std::max(0, static_cast<int>(std::floor(minx)));
  r.y0 = std::max(0, static_cast<int>(std::floor(miny)));
  r.x1 = std::min(view.image.width, static_cast<int>(std::ceil(maxx)) + 1);
  r.y1 = std::min(view.image.height, static_cast<int>(std::ceil(maxy)) + 1);
  if (r.empty()) return {};
  return r;
}

}  // namespace deadeye
