#include "deadeye/render/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "deadeye/core/error.hpp"

namespace deadeye {

HighlightSpec HighlightSpec::deadeye(Eye suppressed, std::size_t target) {
  HighlightSpec h;
  h.mode = Mode::deadeye;
  h.suppressed_eye = suppressed;
  h.target = target;
  return h;
}

HighlightSpec HighlightSpec::color_popout(std::size_t target, Rgb8 color) {
  HighlightSpec h;
  h.mode = Mode::color_popout;
  h.highlight_color = color;
  h.target = target;
  return h;
}

HighlightSpec HighlightSpec::flicker(std::size_t target, double frequency_hz, double duty) {
  HighlightSpec h;
  h.mode = Mode::flicker;
  h.frequency_hz = frequency_hz;
  h.duty = duty;
  h.target = target;
  return h;
}

HighlightSpec HighlightSpec::from_scene(const TrialScene& scene) {
  if (!scene.target_index) return none();
  switch (scene.highlight) {
    case Highlight::deadeye_left: return deadeye(Eye::left, *scene.target_index);
    case Highlight::deadeye_right: return deadeye(Eye::right, *scene.target_index);
    case Highlight::color_popout: return color_popout(*scene.target_index);
    case Highlight::flicker: return flicker(*scene.target_index);
    case Highlight::none: break;
  }
  return none();
}

Highlight HighlightSpec::technique() const {
  switch (mode) {
    case Mode::deadeye: return suppressed_eye == Eye::left ? Highlight::deadeye_left : Highlight::deadeye_right;
    case Mode::color_popout: return Highlight::color_popout;
    case Mode::flicker: return Highlight::flicker;
    case Mode::none: break;
  }
  return Highlight::none;
}

void HighlightSpec::check() const {
  if (mode == Mode::flicker && !(frequency_hz > 0.0)) throw Error(ErrorKind::domain, "flicker frequency must be > 0");
  if (mode == Mode::flicker && !(duty > 0.0 && duty < 1.0)) throw Error(ErrorKind::domain, "flicker duty must be in (0, 1)");
}

bool flicker_visible(double time_ms, double frequency_hz, double duty) {
  const double period = 1000.0 / frequency_hz;
  const double phase = time_ms - std::floor(time_ms / period) * period;
  return phase < duty * period;
}

namespace {

const Vec3 kLightDirection = normalize(Vec3{-0.35, 0.6, 0.72});
constexpr double kAmbient = 0.35;
constexpr double kDiffuse = 0.65;

std::uint32_t shade(Rgb8 base, const Vec3& normal) {
  const double k = kAmbient + kDiffuse * std::max(0.0, dot(normal, kLightDirection));
  auto ch = [k](std::uint8_t c) {
    return static_cast<std::uint8_t>(std::min(255L, std::lround(c * k)));
  };
  return pack_rgb({ch(base.r), ch(base.g), ch(base.b)});
}

RgbImage downsample(const RgbImage& hi, int factor) {
  RgbImage out(hi.width / factor, hi.height / factor);
  const int n = factor * factor;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      int sum[3] = {0, 0, 0};
      for (int dy = 0; dy < factor; ++dy) {
        for (int dx = 0; dx < factor; ++dx) {
          const Rgb8 c = hi.at(x * factor + dx, y * factor + dy);
          sum[0] += c.r;
          sum[1] += c.g;
          sum[2] += c.b;
        }
      }
      out.set(x, y,
              {static_cast<std::uint8_t>((sum[0] + n / 2) / n), static_cast<std::uint8_t>((sum[1] + n / 2) / n),
               static_cast<std::uint8_t>((sum[2] + n / 2) / n)});
    }
  }
  return out;
}

}  // namespace

void append_object_triangles(const SceneObject& object, Rgb8 base_color, std::int32_t id,
                             std::vector<RasterTriangle>& out) {
  for (const auto& tri : tessellate(to_solid(object))) {
    const Vec3 n = normalize(cross(tri[1] - tri[0], tri[2] - tri[0]));
    out.push_back({{tri[0], tri[1], tri[2]}, shade(base_color, n), id});
  }
}

RenderedFrame render_eye(const TrialScene& scene, const EyeView& view, const HighlightSpec& highlight, double time_ms,
                         ImageSize size, const RenderOptions& options) {
  if (size.width <= 0 || size.height <= 0) throw Error(ErrorKind::domain, "image size must be positive");
  if (options.supersample < 1 || options.supersample > 4) {
    throw Error(ErrorKind::configuration, "supersample factor must be in [1, 4]");
  }
  highlight.check();

  // A highlight only applies to the scene's actual target.
  const std::optional<std::size_t> target =
      highlight.target && scene.target_index && *highlight.target == *scene.target_index ? highlight.target
                                                                                          : std::nullopt;
  const HighlightSpec::Mode mode = target ? highlight.mode : HighlightSpec::Mode::none;

  RenderedFrame frame;
  frame.eye = view.eye;
  frame.scene_id = scene.scene_id;
  frame.technique = target ? highlight.technique() : Highlight::none;
  frame.flicker_phase =
      mode != HighlightSpec::Mode::flicker || flicker_visible(time_ms, highlight.frequency_hz, highlight.duty);

  const bool omit_target = (mode == HighlightSpec::Mode::deadeye && view.eye == highlight.suppressed_eye) ||
                           (mode == HighlightSpec::Mode::flicker && !frame.flicker_phase);

  const std::size_t target_slot = target.value_or(scene.objects.size());
  std::vector<RasterTriangle> triangles;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const bool is_target = i == target_slot;
    if (is_target && omit_target) continue;
    const Rgb8 base =
        is_target && mode == HighlightSpec::Mode::color_popout ? highlight.highlight_color : scene.objects[i].color;
    append_object_triangles(scene.objects[i], base, static_cast<std::int32_t>(i), triangles);
  }

  EyeView raster_view = view;
  raster_view.image = {size.width * options.supersample, size.height * options.supersample};
  Framebuffer fb(raster_view.image.width, raster_view.image.height, options.background);
  RasterOptions ro;
  ro.threads = options.threads;
  ro.isa = options.isa;
  rasterize(raster_view, triangles, fb, ro);
  frame.image = options.supersample == 1 ? fb.to_image() : downsample(fb.to_image(), options.supersample);
  return frame;
}

std::pair<RenderedFrame, RenderedFrame> render_stereo_pair(const TrialScene& scene, const StereoRig& rig,
                                                           const HighlightSpec& highlight, double time_ms,
                                                           ImageSize size, const RenderOptions& options) {
  const auto [left, right] = derive_eye_views(rig, size);
  return {render_eye(scene, left, highlight, time_ms, size, options),
          render_eye(scene, right, highlight, time_ms, size, options)};
}

const char* to_string(StereoLayout layout) {
  switch (layout) {
    case StereoLayout::side_by_side: return "side_by_side";
    case StereoLayout::anaglyph_red_cyan: return "anaglyph_red_cyan";
    case StereoLayout::left_only: return "left_only";
    case StereoLayout::right_only: return "right_only";
  }
  return "unknown";
}

StereoLayout stereo_layout_from_string(const std::string& text) {
  for (StereoLayout l : {StereoLayout::side_by_side, StereoLayout::anaglyph_red_cyan, StereoLayout::left_only,
                         StereoLayout::right_only}) {
    if (text == to_string(l)) return l;
  }
  if (text == "anaglyph") return StereoLayout::anaglyph_red_cyan;
  throw Error(ErrorKind::format, "unknown layout '" + text + "'");
}

std::uint8_t luma(Rgb8 c) { return static_cast<std::uint8_t>((54 * c.r + 183 * c.g + 19 * c.b + 128) >> 8); }

RgbImage compose(const RenderedFrame& left, const RenderedFrame& right, StereoLayout layout) {
  if (left.image.width != right.image.width || left.image.height != right.image.height) {
    throw Error(ErrorKind::composition, "stereo frames differ in size");
  }
  const int w = left.image.width, h = left.image.height;
  switch (layout) {
    case StereoLayout::left_only: return left.image;
    case StereoLayout::right_only: return right.image;
    case StereoLayout::side_by_side: {
      RgbImage out(2 * w, h);
      const std::size_t row = static_cast<std::size_t>(w) * 3;
      for (int y = 0; y < h; ++y) {
        std::copy_n(&left.image.pixels[y * row], row, &out.pixels[y * 2 * row]);
        std::copy_n(&right.image.pixels[y * row], row, &out.pixels[y * 2 * row + row]);
      }
      return out;
    }
    case StereoLayout::anaglyph_red_cyan: {
      RgbImage out(w, h);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const std::uint8_t l = luma(left.image.at(x, y));
          const std::uint8_t r = luma(right.image.at(x, y));
          out.set(x, y, {l, r, r});
        }
      }
      return out;
    }
  }
  throw Error(ErrorKind::composition, "unknown layout");
}

std::vector<std::uint8_t> solo_footprint(const TrialScene& scene, std::size_t object_index, const EyeView& view) {
  if (object_index >= scene.objects.size()) throw Error(ErrorKind::domain, "object index out of range");
  std::vector<RasterTriangle> triangles;
  append_object_triangles(scene.objects[object_index], scene.objects[object_index].color,
                          static_cast<std::int32_t>(object_index), triangles);
  Framebuffer fb(view.image.width, view.image.height);
  rasterize(view, triangles, fb);
  std::vector<std::uint8_t> mask(fb.id.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = fb.id[i] >= 0 ? 1 : 0;
  return mask;
}

}  // namespace deadeye
