#include "deadeye/volume/raycast.hpp"

#include <algorithm>
#include <cmath>

#include "deadeye/core/error.hpp"
#include "deadeye/core/parallel.hpp"

namespace deadeye {

void RenderSettings::check() const {
  if (step_length && !(*step_length > 0.0)) throw Error(ErrorKind::configuration, "step length must be positive");
  if (!(early_termination_alpha > 0.0 && early_termination_alpha <= 1.0)) {
    throw Error(ErrorKind::configuration, "early termination alpha must be in (0, 1]");
  }
  if (lut_size < 2) throw Error(ErrorKind::configuration, "lookup table needs at least two entries");
  if (clip_plane && length(clip_plane->normal) == 0.0) throw Error(ErrorKind::configuration, "clip plane normal is zero");
}

namespace {

// Premultiplied, step-corrected RGBA over the normalized value range.
std::vector<float> build_lut(const TransferFunction& tf, double vmin, double vmax, double step, int size) {
  std::vector<float> lut(static_cast<std::size_t>(size) * 4);
  const double exponent = step / tf.reference_step;
  for (int i = 0; i < size; ++i) {
    const double s = vmin + (vmax - vmin) * i / (size - 1);
    const auto c = tf.evaluate(s);
    const double alpha = c[3] >= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - c[3], exponent);
    lut[4 * i] = static_cast<float>(c[0] * alpha);
    lut[4 * i + 1] = static_cast<float>(c[1] * alpha);
    lut[4 * i + 2] = static_cast<float>(c[2] * alpha);
    lut[4 * i + 3] = static_cast<float>(alpha);
  }
  return lut;
}

// Parametric entry and exit of a ray through an axis-aligned box.
bool slab(const Ray& ray, const Vec3& lo, const Vec3& hi, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1e300;
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a], d = ray.direction[a];
    if (d == 0.0) {
      if (o < lo[a] || o > hi[a]) return false;
      continue;
    }
    double ta = (lo[a] - o) / d, tb = (hi[a] - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t1 > t0;
}

}  // namespace

FloatImage raycast_float(const VolumeGrid& volume, const TransferFunction& tf, const MaskVolume* mask,
                         const EyeView& view, const RenderSettings& settings, ImageSize size) {
  volume.check();
  settings.check();
  tf.check(volume.value_min, volume.value_max);
  if (size.width <= 0 || size.height <= 0) throw Error(ErrorKind::domain, "image size must be positive");
  if (mask && !(mask->dims() == volume.dims)) throw Error(ErrorKind::contract, "mask dims do not match the volume");

  const Dims d = volume.dims;
  std::vector<float> values(d.count());
  const double span = volume.value_max - volume.value_min;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<float>(std::clamp((volume.scalars[i] - volume.value_min) / span, 0.0, 1.0));
  }

  std::vector<std::uint8_t> mask_bytes;
  if (mask && settings.deadeye && *settings.deadeye == view.eye) {
    // Tail padding lets the vector kernel gather 32 bits at the last voxel.
    mask_bytes.assign(d.count() + 4, 0);
    for (std::size_t i = 0; i < d.count(); ++i) mask_bytes[i] = mask->get(i) ? 1 : 0;
  }

  const double step = settings.step_length.value_or(0.5 * volume.min_spacing());
  const std::vector<float> lut = build_lut(tf, volume.value_min, volume.value_max, step, settings.lut_size);

  simd::MarchVolume mv;
  mv.values = values.data();
  mv.mask = mask_bytes.empty() ? nullptr : mask_bytes.data();
  mv.nx = d.nx;
  mv.ny = d.ny;
  mv.nz = d.nz;
  mv.lut = lut.data();
  mv.lut_size = settings.lut_size;
  mv.termination_alpha = static_cast<float>(settings.early_termination_alpha);
  if (settings.clip_plane) {
    const Vec3 n = settings.clip_plane->normal;
    double offset = settings.clip_plane->offset;
    for (int a = 0; a < 3; ++a) {
      const double coef = n[a] * volume.spacing[a];
      const int extent = a == 0 ? d.nx : a == 1 ? d.ny : d.nz;
      mv.clip_normal[a] = static_cast<float>(coef);
      offset -= coef * 0.5 * (extent - 1);
    }
    mv.clip = true;
    mv.clip_offset = static_cast<float>(offset);
  }

  const Vec3 half = volume.extent() * 0.5;
  EyeView v = view;
  v.image = size;
  const simd::KernelTable& k = settings.isa ? simd::kernels(*settings.isa) : simd::kernels();

  FloatImage out{size.width, size.height, std::vector<float>(static_cast<std::size_t>(size.width) * size.height * 3)};
  const float bg[3] = {settings.background.r / 255.0f, settings.background.g / 255.0f, settings.background.b / 255.0f};

  parallel_for(static_cast<std::size_t>(size.height), settings.threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    std::vector<simd::RaySegment> rays(static_cast<std::size_t>(size.width));
    std::vector<float> rgba(rays.size() * 4);
    for (int x = 0; x < size.width; ++x) {
      const Ray ray = v.pixel_ray(x + 0.5, y + 0.5);
      simd::RaySegment& seg = rays[static_cast<std::size_t>(x)];
      double t0, t1;
      if (!slab(ray, half * -1.0, half, t0, t1)) {
        seg = {{0, 0, 0}, {0, 0, 0}, 0};
        continue;
      }
      // Midpoint samples; a partial final interval is dropped.
      const int n = static_cast<int>(std::floor((t1 - t0) / step));
      const Vec3 start = volume.to_voxel(ray.origin + ray.direction * (t0 + 0.5 * step));
      for (int a = 0; a < 3; ++a) {
        seg.origin[a] = static_cast<float>(start[a]);
        seg.step[a] = static_cast<float>(ray.direction[a] * step / volume.spacing[a]);
      }
      seg.steps = n;
    }
    k.ray_march(mv, rays.data(), size.width, rgba.data());
    float* dst = &out.rgb[row * static_cast<std::size_t>(size.width) * 3];
    for (int x = 0; x < size.width; ++x) {
      const float* c = &rgba[static_cast<std::size_t>(x) * 4];
      const float rest = 1.0f - c[3];
      for (int ch = 0; ch < 3; ++ch) dst[3 * x + ch] = std::clamp(c[ch] + rest * bg[ch], 0.0f, 1.0f);
    }
  });
  return out;
}

RgbImage quantize(const FloatImage& image) {
  RgbImage out(image.width, image.height);
  for (std::size_t i = 0; i < image.rgb.size(); ++i) {
    out.pixels[i] = static_cast<std::uint8_t>(std::lround(image.rgb[i] * 255.0f));
  }
  return out;
}

RenderedFrame raycast(const VolumeGrid& volume, const TransferFunction& tf, const MaskVolume* mask, const EyeView& view,
                      const RenderSettings& settings, ImageSize size) {
  RenderedFrame frame;
  frame.eye = view.eye;
  frame.image = quantize(raycast_float(volume, tf, mask, view, settings, size));
  if (settings.deadeye) frame.technique = *settings.deadeye == Eye::left ? Highlight::deadeye_left : Highlight::deadeye_right;
  return frame;
}

StereoRig volume_rig(const VolumeGrid& volume, double azimuth_deg, double elevation_deg, double distance_scale,
                     double eye_separation) {
  if (!(std::abs(elevation_deg) < 89.0)) throw Error(ErrorKind::domain, "elevation must be within (-89, 89) degrees");
  const Vec3 e = volume.extent();
  const double distance = distance_scale * std::max({e.x, e.y, e.z});
  const double az = deg_to_rad(azimuth_deg), el = deg_to_rad(elevation_deg);
  StereoRig rig;
  rig.head_position = Vec3{std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az)} * distance;
  rig.forward = normalize(rig.head_position * -1.0);
  rig.up = {0.0, 1.0, 0.0};
  rig.eye_separation = eye_separation;
  rig.near_plane = 1.0;
  rig.far_plane = 10.0 * distance;
  rig.vertical_fov_deg = 40.0;
  rig.convergence_distance = distance;
  return rig;
}

}  // namespace deadeye
