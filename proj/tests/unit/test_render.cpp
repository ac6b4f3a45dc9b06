#include <doctest.h>

#include <vector>

#include "deadeye/core/error.hpp"
#include "deadeye/render/renderer.hpp"
#include "deadeye/scene/generator.hpp"

using namespace deadeye;

namespace {

constexpr ImageSize kSize{256, 256};

std::vector<TrialScene> target_scenes(SetKind kind, std::uint64_t seed, int limit) {
  std::vector<TrialScene> out;
  for (TrialScene& s : generate_set(SetConfig::for_kind(kind, seed))) {
    if (s.has_target() && static_cast<int>(out.size()) < limit) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::uint8_t> diff_mask(const RgbImage& a, const RgbImage& b) {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(a.width) * a.height);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) m[static_cast<std::size_t>(y) * a.width + x] = a.at(x, y) != b.at(x, y);
  }
  return m;
}

std::vector<std::uint8_t> dilate1(const std::vector<std::uint8_t>& m, int w, int h) {
  std::vector<std::uint8_t> out(m.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m[static_cast<std::size_t>(y) * w + x]) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < w && yy < h) out[static_cast<std::size_t>(yy) * w + xx] = 1;
        }
      }
    }
  }
  return out;
}

bool subset(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

long long count(const std::vector<std::uint8_t>& m) {
  long long n = 0;
  for (auto v : m) n += v;
  return n;
}

}  // namespace

TEST_CASE("suppressed eye equals the scene without its target") {
  const auto [left, right] = derive_eye_views(default_rig(), kSize);
  for (SetKind kind : kAllSetKinds) {
    for (const TrialScene& s : target_scenes(kind, 31, 4)) {
      for (Eye e : {Eye::left, Eye::right}) {
        const EyeView& sup = e == Eye::left ? left : right;
        const EyeView& other = e == Eye::left ? right : left;
        const HighlightSpec h = HighlightSpec::deadeye(e, *s.target_index);
        const RenderedFrame a = render_eye(s, sup, h, 0, kSize);
        const RenderedFrame b = render_eye(s.without_target(), sup, HighlightSpec::none(), 0, kSize);
        REQUIRE(a.image == b.image);
        const RenderedFrame c = render_eye(s, other, h, 0, kSize);
        const RenderedFrame d = render_eye(s, other, HighlightSpec::none(), 0, kSize);
        REQUIRE(c.image == d.image);
        CHECK(a.image != c.image);
      }
    }
  }
}

TEST_CASE("deadeye(left) pair") {
  const TrialScene s = target_scenes(SetKind::exp1_16, 2, 1).front();
  const StereoRig rig = default_rig();
  const auto [l, r] = render_stereo_pair(s, rig, HighlightSpec::deadeye(Eye::left, *s.target_index), 0, kSize);
  const auto [nl, nr] = render_stereo_pair(s, rig, HighlightSpec::none(), 0, kSize);
  const auto [tl, tr] = render_stereo_pair(s.without_target(), rig, HighlightSpec::none(), 0, kSize);
  CHECK(l.eye == Eye::left);
  CHECK(r.eye == Eye::right);
  CHECK(l.technique == Highlight::deadeye_left);
  CHECK(l.image == tl.image);
  CHECK(r.image == nr.image);
  CHECK(r.image != tr.image);

  const auto again = render_stereo_pair(s, rig, HighlightSpec::deadeye(Eye::left, *s.target_index), 0, kSize);
  CHECK(again.first.image == l.image);
  CHECK(again.second.image == r.image);
}

TEST_CASE("zero separation renders identical eyes") {
  StereoRig rig = default_rig();
  rig.eye_separation = 0.0;
  for (const TrialScene& s : target_scenes(SetKind::depth2_color_shape, 3, 3)) {
    const auto [l, r] = render_stereo_pair(s, rig, HighlightSpec::none(), 0, kSize);
    CHECK(l.image == r.image);
  }
}

TEST_CASE("non-target trials ignore the technique") {
  for (const TrialScene& s : generate_set(SetConfig::for_kind(SetKind::exp1_30, 4))) {
    if (s.has_target()) continue;
    const auto a = render_stereo_pair(s, default_rig(), HighlightSpec::from_scene(s), 0, kSize);
    const auto b = render_stereo_pair(s, default_rig(), HighlightSpec::none(), 0, kSize);
    CHECK(a.first.image == b.first.image);
    CHECK(a.second.image == b.second.image);
    CHECK(a.first.technique == Highlight::none);
    break;
  }
}

TEST_CASE("flicker frames differ exactly on the target footprint") {
  const EyeView view = derive_eye_view(default_rig(), kSize, Eye::left);
  for (const TrialScene& s : target_scenes(SetKind::exp1_30, 5, 6)) {
    const HighlightSpec h = HighlightSpec::flicker(*s.target_index, 4.0, 0.5);
    const RenderedFrame on = render_eye(s, view, h, 0, kSize);
    const RenderedFrame off = render_eye(s, view, h, 125, kSize);
    CHECK(on.flicker_phase);
    CHECK_FALSE(off.flicker_phase);
    CHECK(on.image == render_eye(s, view, HighlightSpec::none(), 0, kSize).image);
    // Single-plane layouts never overlap, so the whole footprint changes.
    CHECK(diff_mask(on.image, off.image) == solo_footprint(s, *s.target_index, view));
  }
  CHECK(flicker_visible(0, 4, 0.5));
  CHECK(flicker_visible(124.9, 4, 0.5));
  CHECK_FALSE(flicker_visible(125, 4, 0.5));
  CHECK(flicker_visible(250, 4, 0.5));
}

TEST_CASE("highlight diffs stay inside the target footprint") {
  const auto [left, right] = derive_eye_views(default_rig(), kSize);
  for (const TrialScene& s : target_scenes(SetKind::depth3_color, 6, 4)) {
    const std::size_t t = *s.target_index;
    for (const EyeView* v : {&left, &right}) {
      const auto foot = solo_footprint(s, t, *v);
      const RgbImage none = render_eye(s, *v, HighlightSpec::none(), 0, kSize).image;
      for (const HighlightSpec& h : {HighlightSpec::deadeye(Eye::right, t), HighlightSpec::color_popout(t),
                                     HighlightSpec::flicker(t)}) {
        const RgbImage img = render_eye(s, *v, h, 200, kSize).image;
        REQUIRE(subset(diff_mask(none, img), foot));
      }
    }
  }
}

TEST_CASE("supersampled diffs stay inside the dilated footprint") {
  RenderOptions ss;
  ss.supersample = 2;
  const auto [left, right] = derive_eye_views(default_rig(), kSize);
  for (const TrialScene& s : target_scenes(SetKind::depth2, 7, 3)) {
    const std::size_t t = *s.target_index;
    const auto foot = dilate1(solo_footprint(s, t, right), kSize.width, kSize.height);
    const RgbImage a = render_eye(s, right, HighlightSpec::none(), 0, kSize, ss).image;
    const RgbImage b = render_eye(s, right, HighlightSpec::deadeye(Eye::right, t), 0, kSize, ss).image;
    CHECK(a.width == kSize.width);
    const auto d = diff_mask(a, b);
    CHECK(count(d) > 0);
    CHECK(subset(d, foot));
  }
}

TEST_CASE("thread count and instruction set do not change pixels") {
  const EyeView view = derive_eye_view(default_rig(), {320, 200}, Eye::right);
  for (const TrialScene& s : target_scenes(SetKind::depth2_color_shape, 8, 3)) {
    RenderOptions one, many;
    many.threads = 4;
    const RgbImage a = render_eye(s, view, HighlightSpec::from_scene(s), 0, {320, 200}, one).image;
    CHECK(a == render_eye(s, view, HighlightSpec::from_scene(s), 0, {320, 200}, many).image);
    RenderOptions scalar;
    scalar.isa = simd::Isa::scalar;
    CHECK(a == render_eye(s, view, HighlightSpec::from_scene(s), 0, {320, 200}, scalar).image);
  }
}

TEST_CASE("composition layouts") {
  const TrialScene s = target_scenes(SetKind::exp1_4, 9, 1).front();
  const auto [l, r] = render_stereo_pair(s, default_rig(), HighlightSpec::none(), 0, {64, 48});

  const RgbImage sbs = compose(l, r, StereoLayout::side_by_side);
  CHECK(sbs.width == 128);
  CHECK(sbs.height == 48);
  for (int y = 0; y < 48; y += 7) {
    for (int x = 0; x < 64; x += 5) {
      CHECK(sbs.at(x, y) == l.image.at(x, y));
      CHECK(sbs.at(64 + x, y) == r.image.at(x, y));
    }
  }
  CHECK(compose(l, r, StereoLayout::left_only) == l.image);
  CHECK(compose(l, r, StereoLayout::right_only) == r.image);

  const RgbImage grey = compose(l, l, StereoLayout::anaglyph_red_cyan);
  for (int y = 0; y < grey.height; ++y) {
    for (int x = 0; x < grey.width; ++x) {
      const Rgb8 c = grey.at(x, y);
      REQUIRE(c.r == c.g);
      REQUIRE(c.g == c.b);
    }
  }

  RenderedFrame small = l;
  small.image = RgbImage(10, 10);
  try {
    compose(l, small, StereoLayout::anaglyph_red_cyan);
    FAIL("expected a composition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::composition);
  }
}

TEST_CASE("deadeye anaglyph tints only the target footprint") {
  const auto [left, right] = derive_eye_views(default_rig(), kSize);
  for (const TrialScene& s : target_scenes(SetKind::exp1_16, 10, 3)) {
    const std::size_t t = *s.target_index;
    const auto [nl, nr] = render_stereo_pair(s, default_rig(), HighlightSpec::none(), 0, kSize);
    const auto [dl, dr] = render_stereo_pair(s, default_rig(), HighlightSpec::deadeye(Eye::right, t), 0, kSize);
    const RgbImage plain = compose(nl, nr, StereoLayout::anaglyph_red_cyan);
    const RgbImage tinted = compose(dl, dr, StereoLayout::anaglyph_red_cyan);
    const auto foot = solo_footprint(s, t, right);
    long long changed = 0;
    for (int y = 0; y < kSize.height; ++y) {
      for (int x = 0; x < kSize.width; ++x) {
        const Rgb8 a = plain.at(x, y), b = tinted.at(x, y);
        // Only the right eye lost the target, so only the cyan channels move.
        REQUIRE(a.r == b.r);
        if (a == b) continue;
        ++changed;
        REQUIRE(foot[static_cast<std::size_t>(y) * kSize.width + x]);
        REQUIRE(b.g == b.b);
      }
    }
    CHECK(changed == count(foot));
  }
}

TEST_CASE("render errors") {
  const TrialScene s = target_scenes(SetKind::exp1_4, 1, 1).front();
  const EyeView v = derive_eye_view(default_rig(), kSize, Eye::left);
  try {
    render_eye(s, v, HighlightSpec::none(), 0, {0, 10});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  CHECK_THROWS_AS(render_eye(s, v, HighlightSpec::flicker(0, 0.0), 0, kSize), Error);
  CHECK(stereo_layout_from_string("anaglyph") == StereoLayout::anaglyph_red_cyan);
  CHECK_THROWS_AS(stereo_layout_from_string("top_bottom"), Error);
}

TEST_CASE("luma of primaries") {
  CHECK(luma({0, 0, 0}) == 0);
  CHECK(luma({255, 255, 255}) == 255);
  CHECK(luma({255, 0, 0}) == 54);
  CHECK(luma({0, 255, 0}) == 182);
}
