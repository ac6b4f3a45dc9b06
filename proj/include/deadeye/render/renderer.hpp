#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deadeye/core/image.hpp"
#include "deadeye/geometry/stereo.hpp"
#include "deadeye/render/raster.hpp"
#include "deadeye/scene/scene.hpp"

namespace deadeye {

struct HighlightSpec {
  enum class Mode { none, deadeye, color_popout, flicker };

  Mode mode = Mode::none;
  Eye suppressed_eye = Eye::right;
  Rgb8 highlight_color = kPopoutColor;
  double frequency_hz = 4.0;
  double duty = 0.5;
  std::optional<std::size_t> target;

  static HighlightSpec none() { return {}; }
  static HighlightSpec deadeye(Eye suppressed, std::size_t target);
  static HighlightSpec color_popout(std::size_t target, Rgb8 color = kPopoutColor);
  static HighlightSpec flicker(std::size_t target, double frequency_hz = 4.0, double duty = 0.5);
  /// The technique a trial scene asks for, applied to its own target.
  static HighlightSpec from_scene(const TrialScene& scene);

  Highlight technique() const;
  void check() const;
};

/// True while a flicker square wave is in its visible half-period.
bool flicker_visible(double time_ms, double frequency_hz, double duty);

struct RenderedFrame {
  Eye eye = Eye::left;
  RgbImage image;
  Highlight technique = Highlight::none;
  bool flicker_phase = true;  // target visible under flicker
  std::string scene_id;

  int width() const { return image.width; }
  int height() const { return image.height; }
};

struct RenderOptions {
  unsigned threads = 1;
  std::optional<simd::Isa> isa;
  Rgb8 background{32, 32, 40};
  /// 1 = aliased (bit-exact technique equivalences), 2 = 4x supersampling.
  int supersample = 1;
};

/// Renders one eye. Under deadeye the target is omitted for the suppressed
/// eye; under color_popout its base color is replaced in both eyes; under
/// flicker it is omitted in both eyes during the off half-period.
RenderedFrame render_eye(const TrialScene& scene, const EyeView& view, const HighlightSpec& highlight, double time_ms,
                         ImageSize size, const RenderOptions& options = {});

std::pair<RenderedFrame, RenderedFrame> render_stereo_pair(const TrialScene& scene, const StereoRig& rig,
                                                           const HighlightSpec& highlight, double time_ms,
                                                           ImageSize size, const RenderOptions& options = {});

enum class StereoLayout { side_by_side, anaglyph_red_cyan, left_only, right_only };

const char* to_string(StereoLayout layout);
StereoLayout stereo_layout_from_string(const std::string& text);

/// Integer Rec. 709 luma of an 8-bit color.
std::uint8_t luma(Rgb8 c);

RgbImage compose(const RenderedFrame& left, const RenderedFrame& right, StereoLayout layout);

/// Pixels covered by one object rendered alone (1 = covered).
std::vector<std::uint8_t> solo_footprint(const TrialScene& scene, std::size_t object_index, const EyeView& view);

/// Flat-shaded triangles of a scene object, tagged with `id`.
void append_object_triangles(const SceneObject& object, Rgb8 base_color, std::int32_t id,
                             std::vector<RasterTriangle>& out);

}  // namespace deadeye
