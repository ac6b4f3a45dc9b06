#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "deadeye/core/error.hpp"
#include "deadeye/render/renderer.hpp"
#include "deadeye/scene/generator.hpp"
#include "deadeye/scene/scene_io.hpp"

using namespace deadeye;

namespace {

TrialScene two_cube_scene(double near_size, double far_size) {
  TrialScene s;
  s.scene_id = "hand";
  s.set_kind = SetKind::depth2;
  SceneObject near_obj;
  near_obj.center = {0.0, 0.0, -2.0};
  near_obj.size = near_size;
  near_obj.color = kHomogeneousColor;
  SceneObject far_obj = near_obj;
  far_obj.center = {0.0, 0.0, -4.0};
  far_obj.size = far_size;
  far_obj.depth_plane = 1;
  s.objects = {near_obj, far_obj};
  return s;
}

}  // namespace

TEST_CASE("set sizes and target counts") {
  for (SetKind kind : kAllSetKinds) {
    const SetConfig config = SetConfig::for_kind(kind, 5);
    const auto scenes = generate_set(config);
    REQUIRE(scenes.size() == 48);
    int targets = 0;
    for (const TrialScene& s : scenes) {
      CHECK(static_cast<int>(s.objects.size()) == object_count_for(kind));
      if (s.has_target()) {
        ++targets;
        CHECK(*s.target_index < s.objects.size());
        CHECK(s.highlight == Highlight::deadeye_right);
      } else {
        CHECK(s.highlight == Highlight::none);
      }
    }
    CHECK(targets == 24);
  }
  CHECK(object_count_for(SetKind::exp1_4) == 4);
  CHECK(object_count_for(SetKind::exp1_16) == 16);
  for (SetKind k : {SetKind::exp1_30, SetKind::depth2, SetKind::depth2_color_shape, SetKind::depth3_color}) {
    CHECK(object_count_for(k) == 30);
  }
  CHECK(generate_set(training_config(SetConfig::for_kind(SetKind::exp1_16, 5))).size() == 20);
}

TEST_CASE("config defaults") {
  const SetConfig c;
  CHECK(c.scenes_per_set == 48);
  CHECK(c.training_scenes == 20);
  CHECK(c.target_count() == 24);
  CHECK(c.exposure_ms == 250);
  CHECK(c.crosshair_ms == 2500);
  CHECK(c.pause_s == 30);
  CHECK(c.grid_rows == 5);
  CHECK(c.grid_cols == 6);
  CHECK(c.cube_angular_size_deg == 1.8);
  CHECK(c.grid_half_angle_h_deg == 14.93);
  CHECK(c.grid_half_angle_v_deg == 12.23);
  CHECK(c.plane_separation == 2.0);
  CHECK(SetConfig::for_kind(SetKind::depth2).max_occlusion == 0.10);
  CHECK(SetConfig::for_kind(SetKind::depth3_color).max_occlusion_far == 0.20);
  CHECK(SetConfig::for_kind(SetKind::depth3_color).depth_plane_count == 3);
  CHECK(SetConfig::for_kind(SetKind::depth2_color_shape).depth_plane_count == 2);
  CHECK(SetConfig::for_kind(SetKind::exp1_4).depth_plane_count == 1);

  SetConfig odd;
  odd.scenes_per_set = 47;
  CHECK_THROWS_AS(odd.check(), Error);
  SetConfig planes = SetConfig::for_kind(SetKind::depth2);
  planes.depth_plane_count = 3;
  CHECK_THROWS_AS(planes.check(), Error);
}

TEST_CASE("generation is deterministic") {
  const SetConfig config = SetConfig::for_kind(SetKind::depth3_color, 1);
  CHECK(generate_set(config) == generate_set(config));
  CHECK(generate_set(config, 1) == generate_set(config, 3));
  CHECK(generate_set(config) != generate_set(SetConfig::for_kind(SetKind::depth3_color, 2)));
}

TEST_CASE("order seed permutes the same scenes") {
  const SetConfig config = SetConfig::for_kind(SetKind::depth2, 11);
  const SeedPair base = SeedPair::from(11);
  auto sorted = [](std::vector<TrialScene> v) {
    std::sort(v.begin(), v.end(), [](const TrialScene& a, const TrialScene& b) { return a.scene_id < b.scene_id; });
    return v;
  };
  const auto a = generate_set(config, base);
  const auto b = generate_set(config, SeedPair{base.geometry, base.order + 1});
  CHECK(a != b);
  CHECK(sorted(a) == sorted(b));
  const auto c = generate_set(config, SeedPair{base.geometry + 1, base.order});
  CHECK(sorted(a) != sorted(c));
}

TEST_CASE("appearance palettes") {
  Rng rng(3);
  for (const auto& [shape, color] : assign_appearance(SetConfig::for_kind(SetKind::exp1_16), rng, 16)) {
    CHECK(shape == Shape::cube);
    CHECK(color == kHomogeneousColor);
  }
  std::set<int> colors;
  for (const auto& [shape, color] : assign_appearance(SetConfig::for_kind(SetKind::depth3_color), rng, 30)) {
    CHECK(shape == Shape::cube);
    bool in_palette = false;
    for (int i = 0; i < kPaletteSize; ++i) {
      if (palette_color(i) == color) {
        in_palette = true;
        colors.insert(i);
      }
    }
    CHECK(in_palette);
  }
  CHECK(colors.size() > 3);

  const SetConfig mixed = SetConfig::for_kind(SetKind::depth2_color_shape);
  Rng r1(99), r2(99);
  const auto first = assign_appearance(mixed, r1, 30);
  CHECK(first == assign_appearance(mixed, r2, 30));
  std::set<Shape> shapes;
  for (const auto& [shape, color] : first) shapes.insert(shape);
  CHECK(shapes.size() == 3);
}

TEST_CASE("generated scenes validate") {
  for (SetKind kind : kAllSetKinds) {
    const SetConfig config = SetConfig::for_kind(kind, 21);
    for (const TrialScene& s : generate_set(config)) {
      const ValidationReport r = validate_scene(s, config, default_rig());
      if (!r.ok()) FAIL(s.scene_id << ": " << r.violations.front().check << " " << r.violations.front().detail);
    }
  }
}

TEST_CASE("validation flags a third plane under a two-plane config") {
  const SetConfig config = SetConfig::for_kind(SetKind::depth2, 4);
  TrialScene s = generate_set(config).front();
  s.objects[0].depth_plane = 2;
  CHECK(validate_scene(s, config, default_rig()).has("plane count"));
}

TEST_CASE("validation measures a doubled cube") {
  const SetConfig config = SetConfig::for_kind(SetKind::exp1_4, 4);
  TrialScene s = generate_set(config).front();
  s.objects[1].size *= 2.0;
  const ValidationReport r = validate_scene(s, config, default_rig());
  REQUIRE(r.has("angular size"));
  for (const Violation& v : r.violations) {
    if (v.check != "angular size") continue;
    CHECK(v.object == std::optional<std::size_t>(1));
    CHECK(std::abs(v.measured - 3.60) <= 0.01);
    // Independent check from the object's own geometry.
    const double d = length(s.objects[1].center);
    CHECK(v.measured == doctest::Approx(2.0 * rad_to_deg(std::atan(s.objects[1].size / (2.0 * d)))).epsilon(1e-12));
  }
}

TEST_CASE("object count mismatch is reported") {
  const SetConfig config = SetConfig::for_kind(SetKind::exp1_16, 4);
  TrialScene s = generate_set(config).front();
  s.objects.pop_back();
  if (s.target_index && *s.target_index >= s.objects.size()) s.target_index = 0;
  CHECK(validate_scene(s, config, default_rig()).has("object count"));
}

TEST_CASE("occlusion fraction extremes") {
  const EyeView view = derive_eye_view(default_rig(), {256, 256}, Eye::left);
  TrialScene single = two_cube_scene(0.1, 0.1);
  single.objects.pop_back();
  CHECK(occlusion_fraction(single, 0, view, {256, 256}) == 0.0);

  const TrialScene hidden = two_cube_scene(0.5, 0.05);
  CHECK(occlusion_fraction(hidden, 1, view, {256, 256}) == 1.0);
  CHECK(occlusion_fraction(hidden, 0, view, {256, 256}) == 0.0);

  TrialScene off = single;
  off.objects[0].center = {0.0, 0.0, 3.0};
  try {
    occlusion_fraction(off, 0, view, {256, 256});
    FAIL("expected a measurement error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::measurement);
  }
}

TEST_CASE("occlusion fraction matches a pixel count of the rendered scene") {
  TrialScene s = two_cube_scene(0.2, 0.2);
  s.objects[0].center.x = 0.09;
  const EyeView view = derive_eye_view(default_rig(), {300, 300}, Eye::right);
  const auto far = solo_footprint(s, 1, view);
  TrialScene both = s;
  const RenderedFrame frame = render_eye(both, view, HighlightSpec::none(), 0, {300, 300});
  // The far object keeps its own color only where it is visible.
  TrialScene recolored = s;
  recolored.objects[1].color = {255, 0, 255};
  const RenderedFrame marked = render_eye(recolored, view, HighlightSpec::none(), 0, {300, 300});
  long long solo = 0, visible = 0;
  for (std::size_t i = 0; i < far.size(); ++i) {
    if (!far[i]) continue;
    ++solo;
    const int x = static_cast<int>(i % 300), y = static_cast<int>(i / 300);
    if (marked.image.at(x, y) != frame.image.at(x, y)) ++visible;
  }
  REQUIRE(solo > 0);
  const double oracle = 1.0 - static_cast<double>(visible) / solo;
  CHECK(occlusion_fraction(s, 1, view, {300, 300}) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(oracle > 0.1);
}

TEST_CASE("depth2 far-plane objects keep at least 90 percent visible") {
  const StereoRig rig = default_rig();
  const auto [l, r] = derive_eye_views(rig, {512, 512});
  int far_objects = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SetConfig config = SetConfig::for_kind(SetKind::depth2, seed);
    for (const TrialScene& s : generate_set(config)) {
      for (const EyeView* v : {&l, &r}) {
        const auto m = measure_occlusion(s, *v);
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (s.objects[i].depth_plane != 1) continue;
          ++far_objects;
          const double tol = m[i].solo_pixels ? static_cast<double>(m[i].footprint_width) / m[i].solo_pixels : 0.0;
          REQUIRE(m[i].fraction <= 0.10 + tol);
        }
      }
    }
  }
  CHECK(far_objects > 1000);
}

TEST_CASE("jitter keeps objects inside their cells") {
  for (SetKind kind : kAllSetKinds) {
    const SetConfig config = SetConfig::for_kind(kind, 8);
    const Layout layout(config);
    for (const TrialScene& s : generate_set(config)) {
      for (const SceneObject& o : s.objects) {
        const Vec3 c = layout.cell_center(o.grid_cell, o.depth_plane);
        REQUIRE(std::abs(o.center.x - c.x) < 0.5 * layout.pitch_x(o.depth_plane));
        REQUIRE(std::abs(o.center.y - c.y) < 0.5 * layout.pitch_y(o.depth_plane));
        REQUIRE(std::abs(o.center.z - c.z) < 0.5 * config.plane_separation * layout.reference_side());
      }
    }
  }
}

TEST_CASE("scene sets round trip through files") {
  const SetConfig config = SetConfig::for_kind(SetKind::depth2_color_shape, 0xfedcba9876543210ULL);
  const SceneSet set{config, generate_set(config)};
  const auto path = std::filesystem::temp_directory_path() / "deadeye_test_scene_set.json";
  save_scene_set(path, set);
  CHECK(load_scene_set(path) == set);
  std::filesystem::remove(path);

  CHECK(scene_set_from_json(scene_set_to_json(set)) == set);
  CHECK_THROWS_AS(scene_set_from_json("{}"), Error);
  CHECK_THROWS_AS(scene_set_from_json("not json"), Error);
  std::string text = scene_set_to_json(set);
  const auto pos = text.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 19, "\"format_version\": 9");
  CHECK_THROWS_AS(scene_set_from_json(text), Error);
}

TEST_CASE("without_target drops the target object") {
  const SetConfig config = SetConfig::for_kind(SetKind::exp1_4, 3);
  for (const TrialScene& s : generate_set(config)) {
    const TrialScene t = s.without_target();
    CHECK(t.objects.size() == s.objects.size() - (s.has_target() ? 1 : 0));
    CHECK_FALSE(t.has_target());
    CHECK(t.highlight == Highlight::none);
  }
}
