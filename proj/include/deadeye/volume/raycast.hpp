#pragma once

#include <optional>
#include <vector>

#include "deadeye/core/image.hpp"
#include "deadeye/geometry/stereo.hpp"
#include "deadeye/render/renderer.hpp"
#include "deadeye/simd/kernels.hpp"
#include "deadeye/volume/volume.hpp"

namespace deadeye {

struct ClipPlane {
  Vec3 normal;
  double offset = 0.0;  // samples with normal . p + offset < 0 are discarded (world mm)
};

struct RenderSettings {
  /// Millimeters between samples; empty means half the smallest voxel spacing.
  std::optional<double> step_length;
  double early_termination_alpha = 0.99;
  std::optional<ClipPlane> clip_plane;
  /// Eye for which masked voxels are skipped.
  std::optional<Eye> deadeye;
  Rgb8 background{0, 0, 0};
  unsigned threads = 1;
  std::optional<simd::Isa> isa;
  int lut_size = 4096;

  void check() const;
};

/// Composited color before 8-bit quantization, 3 floats per pixel in [0, 1].
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;
};

FloatImage raycast_float(const VolumeGrid& volume, const TransferFunction& tf, const MaskVolume* mask,
                         const EyeView& view, const RenderSettings& settings, ImageSize size);

RgbImage quantize(const FloatImage& image);

/// Ray casts one eye. The mask only takes effect when view.eye equals
/// settings.deadeye; pass null for no mask.
RenderedFrame raycast(const VolumeGrid& volume, const TransferFunction& tf, const MaskVolume* mask, const EyeView& view,
                      const RenderSettings& settings, ImageSize size);

/// Orbit camera around the volume center, in millimeters.
StereoRig volume_rig(const VolumeGrid& volume, double azimuth_deg, double elevation_deg, double distance_scale = 2.2,
                     double eye_separation = 63.0);

}  // namespace deadeye
