#include "deadeye/scene/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deadeye/core/error.hpp"
#include "deadeye/core/parallel.hpp"
#include "deadeye/render/raster.hpp"
#include "deadeye/render/renderer.hpp"

namespace deadeye {

SeedPair SeedPair::from(std::uint64_t rng_seed) {
  return {derive_seed(rng_seed, "geometry"), derive_seed(rng_seed, "order")};
}

StereoRig default_rig() { return StereoRig{}; }

std::vector<std::pair<Shape, Rgb8>> assign_appearance(const SetConfig& config, Rng& rng, int count) {
  std::vector<std::pair<Shape, Rgb8>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    switch (config.set_kind) {
      case SetKind::depth2_color_shape: {
        const auto shape = static_cast<Shape>(rng.below(3));
        out.emplace_back(shape, palette_color(static_cast<int>(rng.below(kPaletteSize))));
        break;
      }
      case SetKind::depth3_color:
        out.emplace_back(Shape::cube, palette_color(static_cast<int>(rng.below(kPaletteSize))));
        break;
      default: out.emplace_back(Shape::cube, kHomogeneousColor); break;
    }
  }
  return out;
}

namespace {

EyeView crop(const EyeView& view, const PixelRect& r) {
  EyeView v = view;
  const Frustum& f = view.projection;
  const double w = view.image.width, h = view.image.height;
  v.projection.left = f.left + (f.right - f.left) * (r.x0 / w);
  v.projection.right = f.left + (f.right - f.left) * (r.x1 / w);
  v.projection.top = f.top - (f.top - f.bottom) * (r.y0 / h);
  v.projection.bottom = f.top - (f.top - f.bottom) * (r.y1 / h);
  v.image = {r.x1 - r.x0, r.y1 - r.y0};
  return v;
}

// Screen rectangle of the object's bounding cube; the whole image when any
// corner is behind the near plane.
PixelRect coarse_bounds(const SceneObject& o, const EyeView& view) {
  const double h = 0.5 * o.size;
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (int c = 0; c < 8; ++c) {
    const Vec3 corner = o.center + Vec3{(c & 1) ? h : -h, (c & 2) ? h : -h, (c & 4) ? h : -h};
    const Vec3 e = view.to_eye(corner);
    if (e.z < view.projection.near_plane) return {0, 0, view.image.width, view.image.height};
    const ScreenPoint p = view.project_eye(e);
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  // One pixel of slack covers vertex snapping.
  PixelRect r;
  r.x0 = static_cast<int>(std::max(-1.0, std::floor(minx) - 1));
  r.y0 = static_cast<int>(std::max(-1.0, std::floor(miny) - 1));
  r.x1 = static_cast<int>(std::min(view.image.width + 1.0, std::ceil(maxx) + 2));
  r.y1 = static_cast<int>(std::min(view.image.height + 1.0, std::ceil(maxy) + 2));
  return r;
}

bool overlaps(const PixelRect& a, const PixelRect& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

OcclusionMeasure measure_exact(const TrialScene& scene, std::size_t index, const std::vector<std::size_t>& others,
                               const EyeView& view) {
  std::vector<RasterTriangle> solo;
  append_object_triangles(scene.objects[index], scene.objects[index].color, static_cast<std::int32_t>(index), solo);
  const PixelRect bounds = screen_bounds(view, solo);
  if (bounds.empty()) {
    throw Error(ErrorKind::measurement, "object " + std::to_string(index) + " has no on-screen footprint");
  }
  const EyeView sub = crop(view, bounds);
  auto count = [&](const Framebuffer& fb) {
    return std::count(fb.id.begin(), fb.id.end(), static_cast<std::int32_t>(index));
  };

  Framebuffer solo_fb(sub.image.width, sub.image.height);
  rasterize(sub, solo, solo_fb);
  const long long solo_pixels = count(solo_fb);
  if (solo_pixels == 0) {
    throw Error(ErrorKind::measurement, "object " + std::to_string(index) + " has a zero-pixel footprint");
  }

  std::vector<RasterTriangle> all;
  for (std::size_t j = 0; j < scene.objects.size(); ++j) {
    if (j == index || std::find(others.begin(), others.end(), j) != others.end()) {
      append_object_triangles(scene.objects[j], scene.objects[j].color, static_cast<std::int32_t>(j), all);
    }
  }
  Framebuffer full_fb(sub.image.width, sub.image.height);
  rasterize(sub, all, full_fb);
  const long long visible = count(full_fb);

  int min_col = sub.image.width, max_col = -1;
  for (int y = 0; y < sub.image.height; ++y) {
    for (int x = 0; x < sub.image.width; ++x) {
      if (solo_fb.id[static_cast<std::size_t>(y) * sub.image.width + x] >= 0) {
        min_col = std::min(min_col, x);
        max_col = std::max(max_col, x);
      }
    }
  }
  return {1.0 - static_cast<double>(visible) / static_cast<double>(solo_pixels), solo_pixels, max_col - min_col + 1};
}

}  // namespace

double occlusion_fraction(const TrialScene& scene, std::size_t object_index, const EyeView& view,
                          ImageSize resolution) {
  if (object_index >= scene.objects.size()) throw Error(ErrorKind::domain, "object index out of range");
  EyeView v = view;
  v.image = resolution;
  std::vector<std::size_t> others(scene.objects.size());
  std::iota(others.begin(), others.end(), std::size_t{0});
  return measure_exact(scene, object_index, others, v).fraction;
}

std::vector<OcclusionMeasure> measure_occlusion(const TrialScene& scene, const EyeView& view) {
  const std::size_t n = scene.objects.size();
  std::vector<PixelRect> coarse(n);
  for (std::size_t i = 0; i < n; ++i) coarse[i] = coarse_bounds(scene.objects[i], view);
  std::vector<OcclusionMeasure> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && overlaps(coarse[i], coarse[j])) others.push_back(j);
    }
    if (!others.empty()) out[i] = measure_exact(scene, i, others, view);
  }
  return out;
}

double occlusion_cap(const SetConfig& config, int depth_plane) {
  if (config.depth_plane_count >= 3 && depth_plane == config.depth_plane_count - 1) return config.max_occlusion_far;
  return config.max_occlusion;
}

TrialScene generate_scene(const SetConfig& config, std::uint64_t geometry_seed, int index, bool with_target) {
  const Layout layout(config);
  const int count = object_count_for(config.set_kind);
  const int cells = config.grid_rows * config.grid_cols;
  const StereoRig rig = default_rig();
  const ImageSize res{config.occlusion_resolution, config.occlusion_resolution};
  const auto [left, right] = derive_eye_views(rig, res);

  TrialScene scene;
  scene.set_kind = config.set_kind;
  scene.seed = derive_seed(geometry_seed, "scene", static_cast<std::uint64_t>(index));
  scene.scene_id = std::string(to_string(config.set_kind)) + "-" + std::to_string(config.rng_seed) + "-" +
                   (index < 10 ? "0" : "") + std::to_string(index);
  Rng rng(scene.seed);

  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    std::vector<int> order(cells);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<int>(order));
    std::sort(order.begin(), order.begin() + count);
    const auto appearance = assign_appearance(config, rng, count);

    scene.objects.clear();
    for (int k = 0; k < count; ++k) {
      SceneObject o;
      o.grid_cell = {order[k] / config.grid_cols, order[k] % config.grid_cols};
      o.shape = appearance[k].first;
      o.color = appearance[k].second;
      o.depth_plane = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.depth_plane_count)));
      const double jx = rng.uniform(-config.jitter_amplitude, config.jitter_amplitude);
      const double jy = rng.uniform(-config.jitter_amplitude, config.jitter_amplitude);
      const double jz = config.depth_plane_count > 1
                            ? rng.uniform(-config.depth_jitter_amplitude, config.depth_jitter_amplitude)
                            : 0.0;
      o.jitter_offset = {jx, jy, jz};
      o.center = layout.object_center(o.grid_cell, o.depth_plane, o.jitter_offset);
      o.size = layout.object_size_at(o.center);
      scene.objects.push_back(o);
    }
    if (with_target) {
      scene.target_index = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(count)));
      scene.highlight = config.technique;
    } else {
      scene.target_index.reset();
      scene.highlight = Highlight::none;
    }

    bool accepted = true;
    for (const EyeView* view : {&left, &right}) {
      const auto measures = measure_occlusion(scene, *view);
      for (std::size_t i = 0; i < measures.size() && accepted; ++i) {
        accepted = measures[i].fraction <= occlusion_cap(config, scene.objects[i].depth_plane);
      }
      if (!accepted) break;
    }
    if (accepted) return scene;
  }
  throw Error(ErrorKind::generation, "scene " + std::to_string(index) + ": occlusion constraint unsatisfiable after " +
                                         std::to_string(config.max_retries) + " retries");
}

std::vector<TrialScene> generate_set(const SetConfig& config, unsigned threads) {
  return generate_set(config, SeedPair::from(config.rng_seed), threads);
}

std::vector<TrialScene> generate_set(const SetConfig& config, SeedPair seeds, unsigned threads) {
  config.check();
  if (config.technique == Highlight::none && config.target_count() > 0) {
    throw Error(ErrorKind::configuration, "target trials need a highlight technique");
  }
  const int n = config.scenes_per_set;
  const int targets = config.target_count();
  std::vector<TrialScene> scenes(static_cast<std::size_t>(n));
  parallel_for(scenes.size(), threads, [&](std::size_t i) {
    scenes[i] = generate_scene(config, seeds.geometry, static_cast<int>(i), static_cast<int>(i) < targets);
  });
  Rng order(seeds.order);
  order.shuffle(std::span<TrialScene>(scenes));
  return scenes;
}

SetConfig training_config(const SetConfig& config) {
  SetConfig t = config;
  t.scenes_per_set = config.training_scenes;
  t.rng_seed = derive_seed(config.rng_seed, "training");
  return t;
}

bool ValidationReport::has(const std::string& check) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.check == check; });
}

ValidationReport validate_scene(const TrialScene& scene, const SetConfig& config, const StereoRig& rig) {
  ValidationReport report;
  auto add = [&](std::string check, std::optional<std::size_t> object, double measured, double expected,
                 std::string detail = {}) {
    report.violations.push_back({std::move(check), object, measured, expected, std::move(detail)});
  };

  const int expected_count = object_count_for(config.set_kind);
  if (static_cast<int>(scene.objects.size()) != expected_count) {
    add("object count", std::nullopt, static_cast<double>(scene.objects.size()), expected_count);
  }
  if (config.depth_plane_count != depth_planes_for(config.set_kind)) {
    add("plane count", std::nullopt, config.depth_plane_count, depth_planes_for(config.set_kind),
        "config plane count does not match set kind");
  }
  int max_plane = -1;
  bool bad_plane = false;
  for (const SceneObject& o : scene.objects) {
    max_plane = std::max(max_plane, o.depth_plane);
    bad_plane = bad_plane || o.depth_plane < 0 || o.depth_plane >= config.depth_plane_count;
  }
  if (bad_plane) add("plane count", std::nullopt, max_plane + 1, config.depth_plane_count);

  if (scene.target_index && *scene.target_index >= scene.objects.size()) {
    add("target", scene.target_index, static_cast<double>(*scene.target_index), 0.0, "target index out of range");
  }
  if (scene.target_index.has_value() == (scene.highlight == Highlight::none)) {
    add("target", scene.target_index, 0.0, 0.0, "highlight and target presence disagree");
  }

  const Layout layout(config);
  std::vector<int> cell_use(static_cast<std::size_t>(config.grid_rows * config.grid_cols), 0);
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const SceneObject& o = scene.objects[i];
    const GridCell c = o.grid_cell;
    if (c.row < 0 || c.row >= config.grid_rows || c.col < 0 || c.col >= config.grid_cols) {
      add("grid cell", i, 0.0, 0.0, "cell outside the grid");
      continue;
    }
    if (++cell_use[static_cast<std::size_t>(c.row * config.grid_cols + c.col)] > 1) {
      add("grid cell", i, 0.0, 0.0, "cell occupied twice");
    }

    const double size_deg = angular_size(o.size, length(o.center - rig.head_position));
    if (std::abs(size_deg - config.cube_angular_size_deg) > kAngularSizeTolerance) {
      add("angular size", i, size_deg, config.cube_angular_size_deg);
    }

    if (std::abs(o.jitter_offset.x) > config.jitter_amplitude || std::abs(o.jitter_offset.y) > config.jitter_amplitude ||
        std::abs(o.jitter_offset.z) > config.depth_jitter_amplitude) {
      add("jitter", i, std::max(std::abs(o.jitter_offset.x), std::abs(o.jitter_offset.y)), config.jitter_amplitude);
    }

    if (o.depth_plane < 0 || o.depth_plane >= config.depth_plane_count) continue;
    const Vec3 cell_center = layout.unjittered_center(o);
    const AngularOffset angle = angular_offset(rig, cell_center);
    const double want_h = layout.cell_angle_h(c.col);
    const double want_v = layout.cell_angle_v(c.row);
    if (std::abs(angle.horizontal - want_h) > kGridAngleTolerance) add("grid extent", i, angle.horizontal, want_h, "horizontal");
    if (std::abs(angle.vertical - want_v) > kGridAngleTolerance) add("grid extent", i, angle.vertical, want_v, "vertical");

    const double depth = dot(cell_center - rig.head_position, rig_frame(rig).forward);
    const double separations = (depth - config.layout_distance) / layout.reference_side();
    const double want = o.depth_plane * config.plane_separation;
    if (std::abs(separations - want) > 1e-6 * std::max(1.0, want)) {
      add("plane separation", i, separations, want, "plane offset in reference cube sides");
    }
  }

  const ImageSize res{config.occlusion_resolution, config.occlusion_resolution};
  const auto [left, right] = derive_eye_views(rig, res);
  for (const EyeView* view : {&left, &right}) {
    std::vector<OcclusionMeasure> measures;
    try {
      measures = measure_occlusion(scene, *view);
    } catch (const Error& e) {
      add("occlusion", std::nullopt, 1.0, 0.0, e.what());
      continue;
    }
    for (std::size_t i = 0; i < measures.size(); ++i) {
      const OcclusionMeasure& m = measures[i];
      if (m.fraction <= 0.0) continue;
      // One pixel row of the footprint absorbs rasterization quantization.
      const double tolerance = m.solo_pixels > 0 ? static_cast<double>(m.footprint_width) / m.solo_pixels : 0.0;
      const double cap = occlusion_cap(config, scene.objects[i].depth_plane);
      if (m.fraction > cap + tolerance) {
        add("occlusion", i, m.fraction, cap, std::string(to_string(view->eye)) + " eye");
      }
    }
  }
  return report;
}

}  // namespace deadeye
