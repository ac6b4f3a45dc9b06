// Compiled with -mavx2 only (no FMA) so each lane matches the scalar kernels.
#include <immintrin.h>

#include "deadeye/simd/kernels.hpp"

namespace deadeye::simd::avx2 {

void raster_span(const SpanSetup& tri, int y, int x0, int x1, float* depth, std::uint32_t* color, std::int32_t* id) {
  const double py = static_cast<double>(y) + 0.5;
  const __m256d row0 = _mm256_set1_pd(tri.b[0] * py + tri.c[0]);
  const __m256d row1 = _mm256_set1_pd(tri.b[1] * py + tri.c[1]);
  const __m256d row2 = _mm256_set1_pd(tri.b[2] * py + tri.c[2]);
  const __m256d rowq = _mm256_set1_pd(tri.qb * py + tri.qc);
  const __m256d a0 = _mm256_set1_pd(tri.a[0]);
  const __m256d a1 = _mm256_set1_pd(tri.a[1]);
  const __m256d a2 = _mm256_set1_pd(tri.a[2]);
  const __m256d qa = _mm256_set1_pd(tri.qa);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d tl0 = _mm256_castsi256_pd(_mm256_set1_epi64x(tri.top_left[0] ? -1 : 0));
  const __m256d tl1 = _mm256_castsi256_pd(_mm256_set1_epi64x(tri.top_left[1] ? -1 : 0));
  const __m256d tl2 = _mm256_castsi256_pd(_mm256_set1_epi64x(tri.top_left[2] ? -1 : 0));
  const __m128i color4 = _mm_set1_epi32(static_cast<int>(tri.color));
  const __m128i id4 = _mm_set1_epi32(tri.id);
  const __m128i lane = _mm_setr_epi32(0, 1, 2, 3);
  const __m256d half = _mm256_set1_pd(0.5);

  auto covered = [&](__m256d e, __m256d tl) {
    return _mm256_or_pd(_mm256_cmp_pd(e, zero, _CMP_GT_OQ), _mm256_and_pd(_mm256_cmp_pd(e, zero, _CMP_EQ_OQ), tl));
  };

  int x = x0;
  for (; x + 4 <= x1; x += 4) {
    const __m256d px = _mm256_add_pd(_mm256_cvtepi32_pd(_mm_add_epi32(_mm_set1_epi32(x), lane)), half);
    const __m256d e0 = _mm256_add_pd(_mm256_mul_pd(a0, px), row0);
    const __m256d e1 = _mm256_add_pd(_mm256_mul_pd(a1, px), row1);
    const __m256d e2 = _mm256_add_pd(_mm256_mul_pd(a2, px), row2);
    const __m256d inside = _mm256_and_pd(_mm256_and_pd(covered(e0, tl0), covered(e1, tl1)), covered(e2, tl2));
    if (_mm256_movemask_pd(inside) == 0) continue;
    const __m128 q = _mm256_cvtpd_ps(_mm256_add_pd(_mm256_mul_pd(qa, px), rowq));
    const __m128 old_depth = _mm_loadu_ps(depth + x);
    const __m128 inside4 = _mm_castsi128_ps(_mm256_castsi256_si128(
        _mm256_permutevar8x32_epi32(_mm256_castpd_si256(inside), _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7))));
    const __m128 pass = _mm_and_ps(_mm_cmpgt_ps(q, old_depth), inside4);
    _mm_storeu_ps(depth + x, _mm_blendv_ps(old_depth, q, pass));
    const __m128i pass_i = _mm_castps_si128(pass);
    auto* cptr = reinterpret_cast<__m128i*>(color + x);
    auto* iptr = reinterpret_cast<__m128i*>(id + x);
    _mm_storeu_si128(cptr, _mm_blendv_epi8(_mm_loadu_si128(cptr), color4, pass_i));
    _mm_storeu_si128(iptr, _mm_blendv_epi8(_mm_loadu_si128(iptr), id4, pass_i));
  }
  if (x < x1) scalar::raster_span(tri, y, x, x1, depth, color, id);
}

void ray_march(const MarchVolume& v, const RaySegment* rays, int count, float* out_rgba) {
  const __m256 maxx = _mm256_set1_ps(static_cast<float>(v.nx - 1));
  const __m256 maxy = _mm256_set1_ps(static_cast<float>(v.ny - 1));
  const __m256 maxz = _mm256_set1_ps(static_cast<float>(v.nz - 1));
  const __m256i nxm1 = _mm256_set1_epi32(v.nx - 1);
  const __m256i nym1 = _mm256_set1_epi32(v.ny - 1);
  const __m256i nzm1 = _mm256_set1_epi32(v.nz - 1);
  const __m256i nx = _mm256_set1_epi32(v.nx);
  const __m256i ny = _mm256_set1_epi32(v.ny);
  const __m256i nxy = _mm256_set1_epi32(v.nx * v.ny);
  const __m256i one_i = _mm256_set1_epi32(1);
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 half = _mm256_set1_ps(0.5f);
  const __m256 lut_scale = _mm256_set1_ps(static_cast<float>(v.lut_size - 1));
  const __m256 term = _mm256_set1_ps(v.termination_alpha);
  const __m256 cn0 = _mm256_set1_ps(v.clip_normal[0]);
  const __m256 cn1 = _mm256_set1_ps(v.clip_normal[1]);
  const __m256 cn2 = _mm256_set1_ps(v.clip_normal[2]);
  const __m256 cd = _mm256_set1_ps(v.clip_offset);

  int first = 0;
  for (; first + 8 <= count; first += 8) {
    const RaySegment* rs = rays + first;
    alignas(32) float o[3][8], d[3][8];
    alignas(32) std::int32_t steps_arr[8];
    int max_steps = 0;
    for (int k = 0; k < 8; ++k) {
      for (int c = 0; c < 3; ++c) {
        o[c][k] = rs[k].origin[c];
        d[c][k] = rs[k].step[c];
      }
      steps_arr[k] = rs[k].steps;
      max_steps = rs[k].steps > max_steps ? rs[k].steps : max_steps;
    }
    const __m256 ox = _mm256_load_ps(o[0]), oy = _mm256_load_ps(o[1]), oz = _mm256_load_ps(o[2]);
    const __m256 dx = _mm256_load_ps(d[0]), dy = _mm256_load_ps(d[1]), dz = _mm256_load_ps(d[2]);
    const __m256i steps = _mm256_load_si256(reinterpret_cast<const __m256i*>(steps_arr));
    __m256 r = zero, g = zero, b = zero, a = zero;

    for (int i = 0; i < max_steps; ++i) {
      const __m256i iv = _mm256_set1_epi32(i);
      __m256 active = _mm256_and_ps(_mm256_castsi256_ps(_mm256_cmpgt_epi32(steps, iv)),
                                    _mm256_cmp_ps(a, term, _CMP_LT_OQ));
      if (_mm256_movemask_ps(active) == 0) break;
      const __m256 fi = _mm256_cvtepi32_ps(iv);
      const __m256 sx = _mm256_add_ps(ox, _mm256_mul_ps(dx, fi));
      const __m256 sy = _mm256_add_ps(oy, _mm256_mul_ps(dy, fi));
      const __m256 sz = _mm256_add_ps(oz, _mm256_mul_ps(dz, fi));
      if (v.clip) {
        const __m256 side = _mm256_add_ps(
            _mm256_add_ps(_mm256_add_ps(_mm256_mul_ps(cn0, sx), _mm256_mul_ps(cn1, sy)), _mm256_mul_ps(cn2, sz)), cd);
        active = _mm256_andnot_ps(_mm256_cmp_ps(side, zero, _CMP_LT_OQ), active);
      }
      const __m256 px = _mm256_min_ps(maxx, _mm256_max_ps(zero, sx));
      const __m256 py = _mm256_min_ps(maxy, _mm256_max_ps(zero, sy));
      const __m256 pz = _mm256_min_ps(maxz, _mm256_max_ps(zero, sz));

      if (v.mask) {
        const __m256i mx = _mm256_cvttps_epi32(_mm256_add_ps(px, half));
        const __m256i my = _mm256_cvttps_epi32(_mm256_add_ps(py, half));
        const __m256i mz = _mm256_cvttps_epi32(_mm256_add_ps(pz, half));
        const __m256i midx = _mm256_add_epi32(mx, _mm256_mullo_epi32(nx, _mm256_add_epi32(my, _mm256_mullo_epi32(ny, mz))));
        const __m256i bytes = _mm256_and_si256(
            _mm256_i32gather_epi32(reinterpret_cast<const int*>(v.mask), midx, 1), _mm256_set1_epi32(0xff));
        active = _mm256_and_ps(active, _mm256_castsi256_ps(_mm256_cmpeq_epi32(bytes, _mm256_setzero_si256())));
      }
      if (_mm256_movemask_ps(active) == 0) continue;

      const __m256i ix0 = _mm256_cvttps_epi32(px);
      const __m256i iy0 = _mm256_cvttps_epi32(py);
      const __m256i iz0 = _mm256_cvttps_epi32(pz);
      const __m256i ddx = _mm256_sub_epi32(_mm256_min_epi32(_mm256_add_epi32(ix0, one_i), nxm1), ix0);
      const __m256i ddy = _mm256_mullo_epi32(_mm256_sub_epi32(_mm256_min_epi32(_mm256_add_epi32(iy0, one_i), nym1), iy0), nx);
      const __m256i ddz = _mm256_mullo_epi32(_mm256_sub_epi32(_mm256_min_epi32(_mm256_add_epi32(iz0, one_i), nzm1), iz0), nxy);
      const __m256 fx = _mm256_sub_ps(px, _mm256_cvtepi32_ps(ix0));
      const __m256 fy = _mm256_sub_ps(py, _mm256_cvtepi32_ps(iy0));
      const __m256 fz = _mm256_sub_ps(pz, _mm256_cvtepi32_ps(iz0));
      const __m256i base = _mm256_add_epi32(ix0, _mm256_mullo_epi32(nx, _mm256_add_epi32(iy0, _mm256_mullo_epi32(ny, iz0))));
      const float* s = v.values;
      const __m256 v000 = _mm256_i32gather_ps(s, base, 4);
      const __m256 v100 = _mm256_i32gather_ps(s, _mm256_add_epi32(base, ddx), 4);
      const __m256i by = _mm256_add_epi32(base, ddy);
      const __m256 v010 = _mm256_i32gather_ps(s, by, 4);
      const __m256 v110 = _mm256_i32gather_ps(s, _mm256_add_epi32(by, ddx), 4);
      const __m256i bz = _mm256_add_epi32(base, ddz);
      const __m256 v001 = _mm256_i32gather_ps(s, bz, 4);
      const __m256 v101 = _mm256_i32gather_ps(s, _mm256_add_epi32(bz, ddx), 4);
      const __m256i bzy = _mm256_add_epi32(bz, ddy);
      const __m256 v011 = _mm256_i32gather_ps(s, bzy, 4);
      const __m256 v111 = _mm256_i32gather_ps(s, _mm256_add_epi32(bzy, ddx), 4);
      auto lerp = [](__m256 lo, __m256 hi, __m256 t) { return _mm256_add_ps(lo, _mm256_mul_ps(_mm256_sub_ps(hi, lo), t)); };
      const __m256 c00 = lerp(v000, v100, fx);
      const __m256 c10 = lerp(v010, v110, fx);
      const __m256 c01 = lerp(v001, v101, fx);
      const __m256 c11 = lerp(v011, v111, fx);
      const __m256 c0 = lerp(c00, c10, fy);
      const __m256 c1 = lerp(c01, c11, fy);
      const __m256 value = lerp(c0, c1, fz);

      const __m256i li = _mm256_slli_epi32(_mm256_cvttps_epi32(_mm256_add_ps(_mm256_mul_ps(value, lut_scale), half)), 2);
      const __m256 lr = _mm256_i32gather_ps(v.lut, li, 4);
      const __m256 lg = _mm256_i32gather_ps(v.lut, _mm256_add_epi32(li, one_i), 4);
      const __m256 lb = _mm256_i32gather_ps(v.lut, _mm256_add_epi32(li, _mm256_set1_epi32(2)), 4);
      const __m256 la = _mm256_i32gather_ps(v.lut, _mm256_add_epi32(li, _mm256_set1_epi32(3)), 4);
      const __m256 w = _mm256_sub_ps(one, a);
      r = _mm256_blendv_ps(r, _mm256_add_ps(r, _mm256_mul_ps(w, lr)), active);
      g = _mm256_blendv_ps(g, _mm256_add_ps(g, _mm256_mul_ps(w, lg)), active);
      b = _mm256_blendv_ps(b, _mm256_add_ps(b, _mm256_mul_ps(w, lb)), active);
      a = _mm256_blendv_ps(a, _mm256_add_ps(a, _mm256_mul_ps(w, la)), active);
    }
    alignas(32) float rr[8], gg[8], bb[8], aa[8];
    _mm256_store_ps(rr, r);
    _mm256_store_ps(gg, g);
    _mm256_store_ps(bb, b);
    _mm256_store_ps(aa, a);
    for (int k = 0; k < 8; ++k) {
      float* out = out_rgba + 4 * (first + k);
      out[0] = rr[k];
      out[1] = gg[k];
      out[2] = bb[k];
      out[3] = aa[k];
    }
  }
  for (; first < count; ++first) scalar::ray_march_one(v, rays[first], out_rgba + 4 * first);
}

}  // namespace deadeye::simd::avx2
