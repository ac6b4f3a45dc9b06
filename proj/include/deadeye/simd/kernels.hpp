#pragma once

// Data-parallel inner loops of the rasterizer and the volume ray caster.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. Both perform the same IEEE operations in the same order per
// element, so their outputs are bit-identical; the equivalence tests rely on
// that. The variant is chosen once at runtime from CPU support, and the
// DEADEYE_ISA environment variable (scalar|avx2) can pin it.

#include <cstdint>
#include <optional>
#include <string>

namespace deadeye::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);
std::optional<Isa> isa_from_string(const std::string& text);

bool isa_supported(Isa isa);
/// Best supported ISA, honoring DEADEYE_ISA when it names a supported one.
Isa active_isa();

/// One triangle prepared for span rasterization. Edge k is
/// a[k] * x + b[k] * y + c[k] evaluated at pixel centers; a pixel is covered
/// when every edge is positive, or zero on a top-left edge. q is the screen
/// space plane of inverse view depth; larger q is nearer.
struct SpanSetup {
  double a[3];
  double b[3];
  double c[3];
  bool top_left[3];
  double qa;
  double qb;
  double qc;
  std::uint32_t color;
  std::int32_t id;
};

/// Rasterizes pixels [x0, x1) of row y. The row pointers address pixel 0.
using RasterSpanFn = void (*)(const SpanSetup& tri, int y, int x0, int x1, float* depth, std::uint32_t* color,
                              std::int32_t* id);

/// Read-only view of a volume prepared for marching. Positions are in voxel
/// index space (voxel centers at integer coordinates).
struct MarchVolume {
  const float* values = nullptr;        // normalized scalars in [0, 1]
  const std::uint8_t* mask = nullptr;   // one byte per voxel, 4 bytes tail padding; null = nothing suppressed
  int nx = 1;
  int ny = 1;
  int nz = 1;
  const float* lut = nullptr;           // premultiplied r, g, b, alpha per entry
  int lut_size = 0;
  bool clip = false;
  float clip_normal[3] = {0.0f, 0.0f, 0.0f};  // samples with n.p + d < 0 are discarded
  float clip_offset = 0.0f;
  float termination_alpha = 0.99f;
};

/// Sample i of a ray sits at origin + step * i for i in [0, steps).
struct RaySegment {
  float origin[3];
  float step[3];
  std::int32_t steps;
};

/// Front-to-back composites `count` rays into out_rgba (4 floats per ray).
using RayMarchFn = void (*)(const MarchVolume& volume, const RaySegment* rays, int count, float* out_rgba);

struct KernelTable {
  Isa isa;
  RasterSpanFn raster_span;
  RayMarchFn ray_march;
};

/// Kernel table for an ISA; throws if the ISA is not supported here.
const KernelTable& kernels(Isa isa);
inline const KernelTable& kernels() { return kernels(active_isa()); }

namespace scalar {
void raster_span(const SpanSetup& tri, int y, int x0, int x1, float* depth, std::uint32_t* color, std::int32_t* id);
void ray_march(const MarchVolume& volume, const RaySegment* rays, int count, float* out_rgba);
void ray_march_one(const MarchVolume& volume, const RaySegment& ray, float* out_rgba);
}  // namespace scalar

#if defined(DEADEYE_HAVE_AVX2)
namespace avx2 {
void raster_span(const SpanSetup& tri, int y, int x0, int x1, float* depth, std::uint32_t* color, std::int32_t* id);
void ray_march(const MarchVolume& volume, const RaySegment* rays, int count, float* out_rgba);
}  // namespace avx2
#endif

}  // namespace deadeye::simd
