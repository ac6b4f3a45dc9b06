#include <algorithm>

#include "deadeye/simd/kernels.hpp"

namespace deadeye::simd::scalar {

void raster_span(const SpanSetup& tri, int y, int x0, int x1, float* depth, std::uint32_t* color, std::int32_t* id) {
  const double py = static_cast<double>(y) + 0.5;
  const double row0 = tri.b[0] * py + tri.c[0];
  const double row1 = tri.b[1] * py + tri.c[1];
  const double row2 = tri.b[2] * py + tri.c[2];
  const double rowq = tri.qb * py + tri.qc;
  for (int x = x0; x < x1; ++x) {
    const double px = static_cast<double>(x) + 0.5;
    const double e0 = tri.a[0] * px + row0;
    const double e1 = tri.a[1] * px + row1;
    const double e2 = tri.a[2] * px + row2;
    const bool in0 = e0 > 0.0 || (e0 == 0.0 && tri.top_left[0]);
    const bool in1 = e1 > 0.0 || (e1 == 0.0 && tri.top_left[1]);
    const bool in2 = e2 > 0.0 || (e2 == 0.0 && tri.top_left[2]);
    if (!(in0 && in1 && in2)) continue;
    const float q = static_cast<float>(tri.qa * px + rowq);
    if (q > depth[x]) {
      depth[x] = q;
      color[x] = tri.color;
      id[x] = tri.id;
    }
  }
}

void ray_march_one(const MarchVolume& v, const RaySegment& ray, float* out) {
  const int nx = v.nx, ny = v.ny, nz = v.nz;
  const float maxx = static_cast<float>(nx - 1);
  const float maxy = static_cast<float>(ny - 1);
  const float maxz = static_cast<float>(nz - 1);
  const float lut_scale = static_cast<float>(v.lut_size - 1);
  float r = 0.0f, g = 0.0f, b = 0.0f, a = 0.0f;

  for (int i = 0; i < ray.steps; ++i) {
    if (!(a < v.termination_alpha)) break;
    const float fi = static_cast<float>(i);
    const float sx = ray.origin[0] + ray.step[0] * fi;
    const float sy = ray.origin[1] + ray.step[1] * fi;
    const float sz = ray.origin[2] + ray.step[2] * fi;
    if (v.clip) {
      const float side = v.clip_normal[0] * sx + v.clip_normal[1] * sy + v.clip_normal[2] * sz + v.clip_offset;
      if (side < 0.0f) continue;
    }
    const float px = std::min(std::max(sx, 0.0f), maxx);
    const float py = std::min(std::max(sy, 0.0f), maxy);
    const float pz = std::min(std::max(sz, 0.0f), maxz);

    if (v.mask) {
      const int mx = static_cast<int>(px + 0.5f);
      const int my = static_cast<int>(py + 0.5f);
      const int mz = static_cast<int>(pz + 0.5f);
      if (v.mask[mx + nx * (my + ny * mz)] != 0) continue;
    }

    const int ix0 = static_cast<int>(px);
    const int iy0 = static_cast<int>(py);
    const int iz0 = static_cast<int>(pz);
    const int dx = std::min(ix0 + 1, nx - 1) - ix0;
    const int dy = (std::min(iy0 + 1, ny - 1) - iy0) * nx;
    const int dz = (std::min(iz0 + 1, nz - 1) - iz0) * nx * ny;
    const float fx = px - static_cast<float>(ix0);
    const float fy = py - static_cast<float>(iy0);
    const float fz = pz - static_cast<float>(iz0);
    const int base = ix0 + nx * (iy0 + ny * iz0);
    const float* s = v.values;
    const float v000 = s[base], v100 = s[base + dx];
    const float v010 = s[base + dy], v110 = s[base + dy + dx];
    const float v001 = s[base + dz], v101 = s[base + dz + dx];
    const float v011 = s[base + dz + dy], v111 = s[base + dz + dy + dx];
    const float c00 = v000 + (v100 - v000) * fx;
    const float c10 = v010 + (v110 - v010) * fx;
    const float c01 = v001 + (v101 - v001) * fx;
    const float c11 = v011 + (v111 - v011) * fx;
    const float c0 = c00 + (c10 - c00) * fy;
    const float c1 = c01 + (c11 - c01) * fy;
    const float value = c0 + (c1 - c0) * fz;

    const int li = static_cast<int>(value * lut_scale + 0.5f) * 4;
    const float w = 1.0f - a;
    r = r + w * v.lut[li];
    g = g + w * v.lut[li + 1];
    b = b + w * v.lut[li + 2];
    a = a + w * v.lut[li + 3];
  }
  out[0] = r;
  out[1] = g;
  out[2] = b;
  out[3] = a;
}

void ray_march(const MarchVolume& volume, const RaySegment* rays, int count, float* out_rgba) {
  for (int i = 0; i < count; ++i) ray_march_one(volume, rays[i], out_rgba + 4 * i);
}

}  // namespace deadeye::simd::scalar
