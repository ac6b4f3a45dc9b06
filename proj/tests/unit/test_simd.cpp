#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "deadeye/core/rng.hpp"
#include "deadeye/simd/kernels.hpp"

using namespace deadeye;
using namespace deadeye::simd;

namespace {

SpanSetup random_span(Rng& rng, int width) {
  SpanSetup t{};
  // Integer and half-integer coefficients put many pixel centers exactly on
  // an edge, which exercises the top-left tie rule.
  for (int k = 0; k < 3; ++k) {
    t.a[k] = static_cast<double>(static_cast<int>(rng.below(9)) - 4) * 0.5;
    t.b[k] = static_cast<double>(static_cast<int>(rng.below(9)) - 4) * 0.5;
    t.c[k] = rng.uniform(-2.0, 2.0) * width;
    if (rng.bernoulli(0.3)) t.c[k] = std::round(t.c[k]);
    t.top_left[k] = rng.bernoulli(0.5);
  }
  t.qa = rng.uniform(-1e-3, 1e-3);
  t.qb = rng.uniform(-1e-3, 1e-3);
  t.qc = rng.uniform(0.1, 1.0);
  t.color = static_cast<std::uint32_t>(rng.next_u64() & 0xffffff);
  t.id = static_cast<std::int32_t>(rng.below(1000));
  return t;
}

struct MarchFixture {
  int nx = 13, ny = 9, nz = 11;
  std::vector<float> values;
  std::vector<std::uint8_t> mask;
  std::vector<float> lut;
  MarchVolume volume;

  explicit MarchFixture(Rng& rng, bool with_mask, bool clip) {
    values.resize(static_cast<std::size_t>(nx) * ny * nz);
    for (float& v : values) v = static_cast<float>(rng.uniform());
    mask.assign(values.size() + 4, 0);
    for (std::size_t i = 0; i < values.size(); ++i) mask[i] = rng.bernoulli(0.2) ? 1 : 0;
    const int lut_size = 256;
    lut.resize(lut_size * 4);
    for (int i = 0; i < lut_size; ++i) {
      const float a = static_cast<float>(rng.uniform(0.0, 0.3));
      for (int c = 0; c < 3; ++c) lut[i * 4 + c] = a * static_cast<float>(rng.uniform());
      lut[i * 4 + 3] = a;
    }
    volume.values = values.data();
    volume.mask = with_mask ? mask.data() : nullptr;
    volume.nx = nx;
    volume.ny = ny;
    volume.nz = nz;
    volume.lut = lut.data();
    volume.lut_size = lut_size;
    volume.clip = clip;
    volume.clip_normal[0] = 0.6f;
    volume.clip_normal[1] = -0.8f;
    volume.clip_offset = -1.0f;
  }
};

std::vector<RaySegment> random_rays(Rng& rng, int count) {
  std::vector<RaySegment> rays(static_cast<std::size_t>(count));
  for (RaySegment& r : rays) {
    for (int k = 0; k < 3; ++k) {
      r.origin[k] = static_cast<float>(rng.uniform(-2.0, 14.0));
      r.step[k] = static_cast<float>(rng.uniform(-0.6, 0.6));
    }
    r.steps = static_cast<std::int32_t>(rng.below(60));
  }
  return rays;
}

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(isa_supported(Isa::scalar));
  CHECK(kernels(Isa::scalar).isa == Isa::scalar);
  CHECK(isa_from_string("avx2") == Isa::avx2);
  CHECK_FALSE(isa_from_string("neon").has_value());
}

#if defined(DEADEYE_HAVE_AVX2)

TEST_CASE("avx2 span rasterization is bit-identical to scalar") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("avx2 not supported on this CPU; skipped");
    return;
  }
  Rng rng(2024);
  const int width = 83;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<float> d0(width), d1;
    std::vector<std::uint32_t> c0(width, 7), c1;
    std::vector<std::int32_t> i0(width, -1), i1;
    for (int x = 0; x < width; ++x) d0[x] = rng.bernoulli(0.5) ? 0.0f : static_cast<float>(rng.uniform(0.0, 1.0));
    d1 = d0;
    c1 = c0;
    i1 = i0;
    const SpanSetup t = random_span(rng, width);
    const int y = static_cast<int>(rng.below(64));
    const int x0 = static_cast<int>(rng.below(width));
    const int x1 = x0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(width - x0) + 1));
    scalar::raster_span(t, y, x0, x1, d0.data(), c0.data(), i0.data());
    avx2::raster_span(t, y, x0, x1, d1.data(), c1.data(), i1.data());
    REQUIRE(std::memcmp(d0.data(), d1.data(), d0.size() * sizeof(float)) == 0);
    REQUIRE(c0 == c1);
    REQUIRE(i0 == i1);
  }
}

TEST_CASE("avx2 ray marching is bit-identical to scalar") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("avx2 not supported on this CPU; skipped");
    return;
  }
  Rng rng(77);
  for (bool with_mask : {false, true}) {
    for (bool clip : {false, true}) {
      MarchFixture f(rng, with_mask, clip);
      for (float term : {0.99f, 1.0f, 0.3f}) {
        f.volume.termination_alpha = term;
        const auto rays = random_rays(rng, 203);
        std::vector<float> a(rays.size() * 4), b(rays.size() * 4);
        scalar::ray_march(f.volume, rays.data(), static_cast<int>(rays.size()), a.data());
        avx2::ray_march(f.volume, rays.data(), static_cast<int>(rays.size()), b.data());
        REQUIRE(std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0);
      }
    }
  }
}

#endif
