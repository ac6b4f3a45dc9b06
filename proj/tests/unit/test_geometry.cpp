#include <doctest.h>

#include <cmath>
#include <map>

#include "deadeye/core/error.hpp"
#include "deadeye/geometry/stereo.hpp"
#include "deadeye/geometry/zones.hpp"
#include "deadeye/scene/generator.hpp"
#include "zone_fixtures.hpp"

using namespace deadeye;

namespace {

// Closest points of two lines; returns the midpoint and the gap.
std::pair<Vec3, double> closest_approach(const Ray& a, const Ray& b) {
  const Vec3 w = a.origin - b.origin;
  const double aa = dot(a.direction, a.direction), bb = dot(b.direction, b.direction);
  const double ab = dot(a.direction, b.direction);
  const double d = dot(a.direction, w), e = dot(b.direction, w);
  const double den = aa * bb - ab * ab;
  const double s = (ab * e - bb * d) / den;
  const double t = (aa * e - ab * d) / den;
  const Vec3 pa = a.origin + a.direction * s, pb = b.origin + b.direction * t;
  return {(pa + pb) * 0.5, length(pa - pb)};
}

}  // namespace

TEST_CASE("zero separation gives identical views") {
  StereoRig rig;
  rig.eye_separation = 0.0;
  const auto [l, r] = derive_eye_views(rig, {640, 480});
  EyeView r_as_left = r;
  r_as_left.eye = Eye::left;
  CHECK(l == r_as_left);
}

TEST_CASE("parallel eyes are offset along the right axis") {
  StereoRig rig;
  rig.head_position = {0.3, 1.6, -0.2};
  rig.forward = {1.0, 0.0, -1.0};
  const auto [l, r] = derive_eye_views(rig, {512, 512});
  const RigFrame f = rig_frame(rig);
  const Vec3 d = r.position() - l.position();
  CHECK(length(d) == doctest::Approx(0.063).epsilon(1e-14));
  CHECK(dot(normalize(d), f.right) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l.view.rotation == r.view.rotation);
  CHECK(l.projection == r.projection);
}

TEST_CASE("views are deterministic") {
  StereoRig rig;
  rig.convergence_distance = 1.5;
  CHECK(derive_eye_views(rig, {100, 80}) == derive_eye_views(rig, {100, 80}));
}

TEST_CASE("converged optical axes meet at the convergence distance") {
  StereoRig rig;
  rig.convergence_distance = 2.0;
  const auto [l, r] = derive_eye_views(rig, {512, 512});
  const auto [p, gap] = closest_approach(l.pixel_ray(256, 256), r.pixel_ray(256, 256));
  CHECK(gap < 1e-12);
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.z == doctest::Approx(-2.0).epsilon(1e-12));

  // A point on the convergence plane lands on the same pixel in both eyes.
  const Vec3 q{0.17, -0.05, -2.0};
  CHECK(l.project(q).x == doctest::Approx(r.project(q).x).epsilon(1e-9));
}

TEST_CASE("degenerate rigs are configuration errors") {
  StereoRig rig;
  rig.up = {0.0, 0.0, -2.0};
  try {
    derive_eye_views(rig, {64, 64});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
  StereoRig zero;
  zero.forward = {0, 0, 0};
  CHECK_THROWS_AS(derive_eye_views(zero, {64, 64}), Error);
  StereoRig planes;
  planes.near_plane = 0.0;
  CHECK_THROWS_AS(derive_eye_views(planes, {64, 64}), Error);
}

TEST_CASE("angular size") {
  CHECK(angular_size(0.0, 1.0) == 0.0);
  CHECK(angular_size(2.0, 1.0) == doctest::Approx(90.0).epsilon(1e-14));
  CHECK_THROWS_AS(angular_size(1.0, 0.0), Error);
  CHECK_THROWS_AS(angular_size(1.0, -1.0), Error);
  CHECK_THROWS_AS(angular_size(-1.0, 1.0), Error);

  const Layout layout(SetConfig{});
  CHECK(std::abs(angular_size(layout.reference_side(), 2.0) - 1.8) <= 0.01);
}

TEST_CASE("layout distance solver") {
  const double w = 1.37;
  const double d = solve_layout_distance(w, 14.93);
  const double residual = std::abs(0.5 * w - d * std::tan(deg_to_rad(14.93))) / (0.5 * w);
  CHECK(residual < 1e-9);
  CHECK(solve_layout_distance(2.0, 45.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(solve_layout_distance(0.0, 10.0), Error);
  CHECK_THROWS_AS(solve_layout_distance(1.0, 90.0), Error);
}

TEST_CASE("angular size inverts the layout solver") {
  for (double theta = 0.1; theta < 80.0; theta *= 1.07) {
    const double w = 0.5 + theta / 40.0;
    const double d = solve_layout_distance(w, theta);
    const double back = 0.5 * angular_size(w, d);
    REQUIRE(std::abs(back - theta) / theta < 1e-9);
  }
}

TEST_CASE("grid extremes sit at the configured visual angles") {
  const SetConfig config;
  const Layout layout(config);
  const StereoRig rig = default_rig();
  for (int plane = 0; plane < 3; ++plane) {
    const auto right_col = angular_offset(rig, layout.cell_center({2, 5}, plane));
    const auto top_row = angular_offset(rig, layout.cell_center({0, 2}, plane));
    CHECK(std::abs(right_col.horizontal - 14.93) <= 0.05);
    CHECK(std::abs(top_row.vertical - 12.23) <= 0.05);
  }
}

TEST_CASE("empty occluder set is binocular") {
  const StereoRig rig;
  CHECK(classify_monocular_zone({0.1, 0.2, -3.0}, {}, rig) == MonocularZone::binocular);
}

TEST_CASE("two-plane configuration: far-plane monocular regions") {
  const fixture::TwoPlaneScene s;
  const StereoRig rig;
  // The right eye sees around the near surface's right edge, the left eye
  // around its left edge.
  CHECK(classify_monocular_zone(s.behind_right_edge(), s.occluders, rig) == MonocularZone::valid_right_only);
  CHECK(classify_monocular_zone(s.behind_left_edge(), s.occluders, rig) == MonocularZone::valid_left_only);
  CHECK(classify_monocular_zone(s.behind_center(), s.occluders, rig) == MonocularZone::hidden);
  CHECK(classify_monocular_zone(s.open_far_plane(), s.occluders, rig) == MonocularZone::binocular);
}

TEST_CASE("deadeye target without an occluder is invalid") {
  const StereoRig rig;
  const Vec3 cube{0.2, 0.1, -2.0};
  CHECK(classify_monocular_zone(cube, {}, rig, Presentation::left_only) == MonocularZone::invalid_left_only);
  CHECK(classify_monocular_zone(cube, {}, rig, Presentation::right_only) == MonocularZone::invalid_right_only);

  // Occluding the suppressed eye's line of sight makes the same image valid.
  const fixture::TwoPlaneScene s;
  CHECK(classify_monocular_zone(s.behind_left_edge(), s.occluders, rig, Presentation::left_only) ==
        MonocularZone::valid_left_only);
}

TEST_CASE("mirroring the scene mirrors every classification") {
  const StereoRig rig;
  std::map<MonocularZone, int> seen;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto scene = fixture::random_zone_scene(seed);
    const auto mirrored_occluders = fixture::mirrored_solids(scene.occluders);
    for (const Vec3& p : scene.points) {
      for (Presentation pres : {Presentation::both, Presentation::left_only, Presentation::right_only}) {
        const MonocularZone z = classify_monocular_zone(p, scene.occluders, rig, pres);
        const MonocularZone m = classify_monocular_zone(fixture::mirror(p), mirrored_occluders, rig, fixture::mirror(pres));
        REQUIRE(m == mirrored(z));
        if (pres == Presentation::both) seen[z]++;
      }
    }
  }
  CHECK(seen[MonocularZone::valid_left_only] > 0);
  CHECK(seen[MonocularZone::valid_right_only] > 0);
  CHECK(seen[MonocularZone::binocular] > 0);
}
