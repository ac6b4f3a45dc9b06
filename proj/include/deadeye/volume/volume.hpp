#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "deadeye/core/vec.hpp"

namespace deadeye {

struct Dims {
  int nx = 1;
  int ny = 1;
  int nz = 1;

  std::size_t count() const { return static_cast<std::size_t>(nx) * ny * nz; }
  std::size_t index(int x, int y, int z) const { return static_cast<std::size_t>(x) + nx * (y + static_cast<std::size_t>(ny) * z); }
  bool operator==(const Dims&) const = default;
};

/// Dense scalar volume. World space is millimeters with the grid centered on
/// the origin; voxel (i, j, k) sits at ((i - (nx-1)/2) * sx, ...).
struct VolumeGrid {
  Dims dims;
  Vec3 spacing{1.0, 1.0, 1.0};
  int bit_depth = 8;  // 8 or 16
  std::vector<std::uint16_t> scalars;
  double value_min = 0.0;
  double value_max = 255.0;

  VolumeGrid() = default;
  VolumeGrid(Dims d, Vec3 spacing, int bit_depth, double value_min, double value_max);

  std::uint16_t at(int x, int y, int z) const { return scalars[dims.index(x, y, z)]; }
  Vec3 voxel_center(int x, int y, int z) const;
  /// World point in voxel index coordinates.
  Vec3 to_voxel(const Vec3& world) const;
  Vec3 extent() const;  // world size of the sampled box
  double min_spacing() const;
  /// Throws a contract error if the invariants are broken.
  void check() const;
};

/// One bit per voxel, x fastest.
class MaskVolume {
 public:
  MaskVolume() = default;
  explicit MaskVolume(Dims dims, bool value = false);

  const Dims& dims() const { return dims_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool get(int x, int y, int z) const { return get(dims_.index(x, y, z)); }
  void set(std::size_t i, bool value);
  void set(int x, int y, int z, bool value) { set(dims_.index(x, y, z), value); }
  std::size_t popcount() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const MaskVolume&) const = default;

 private:
  Dims dims_;
  std::vector<std::uint64_t> words_;
};

/// Per-voxel segment ids; 0 is background.
struct LabelVolume {
  Dims dims;
  std::vector<std::uint16_t> labels;

  std::uint16_t at(int x, int y, int z) const { return labels[dims.index(x, y, z)]; }
};

enum class BrushMode { set, clear };

/// Sets or clears every voxel whose center lies within `radius` of `center`
/// (both in world millimeters). Returns the number of bits that changed.
std::size_t brush_erase(MaskVolume& mask, const Vec3& center, double radius, const VolumeGrid& grid, BrushMode mode);

struct SegmentMask {
  MaskVolume mask;
  bool id_absent = false;  // warning: no voxel carries the requested id
};

SegmentMask mask_from_segment(const LabelVolume& segments, std::uint16_t id);

/// Chebyshev dilation by `radius` voxels.
MaskVolume dilate(const MaskVolume& mask, int radius);

struct TransferPoint {
  double scalar;
  std::array<double, 4> rgba;  // components and opacity in [0, 1]
};

/// Piecewise-linear map from raw scalar values to color and opacity.
/// Opacity is per reference_step millimeters of ray travel.
struct TransferFunction {
  std::vector<TransferPoint> points;
  double reference_step = 1.0;

  std::array<double, 4> evaluate(double scalar) const;
  /// Scalars strictly increasing, components in [0, 1], and the points cover
  /// [value_min, value_max]. Throws configuration errors.
  void check(double value_min, double value_max) const;
  void check() const;

  /// Text form: one `scalar r g b a` line per point; '#' starts a comment.
  static TransferFunction parse(const std::string& text);
  static TransferFunction load(const std::filesystem::path& path);
  std::string to_text() const;

  /// Greyscale ramp and a colored preset over a value range.
  static TransferFunction greyscale(double value_min, double value_max);
  static TransferFunction colored(double value_min, double value_max);
};

// Raw volume sidecar header, one `key values` pair per line:
//   deadeye-raw 1
//   dims 64 64 64
//   spacing 1 1 1
//   bits 8            (8, 16, or 1 for packed masks)
//   range 0 255
//   data volume.raw   (relative to the header's directory)
// Multi-byte scalars are little-endian; mask bits are packed LSB first.
VolumeGrid load_raw_volume(const std::filesystem::path& header_path);
void save_raw_volume(const std::filesystem::path& header_path, const VolumeGrid& grid);

MaskVolume load_mask(const std::filesystem::path& header_path);
void save_mask(const std::filesystem::path& header_path, const MaskVolume& mask, const Vec3& spacing);

enum class PhantomKind { nested_spheres, gradient_block, tube_tangle };

const char* to_string(PhantomKind kind);
PhantomKind phantom_kind_from_string(const std::string& text);

struct Phantom {
  VolumeGrid grid;
  LabelVolume labels;
  int segment_count = 0;
};

/// Edge length used when a phantom size is not given.
inline constexpr int kDefaultPhantomSide = 96;

/// Procedural 12-bit test volumes with analytic segment labels. Every
/// segment is separated from other material by at least two zero-valued
/// voxels.
Phantom make_phantom(PhantomKind kind, Dims dims);

/// Analytic label of a voxel for the nested_spheres phantom, for brute-force
/// checks. Normalized radius r = |p - center| / (min(dims) / 2); label 1 is
/// the core r <= 0.2, label 2 the shell [0.35, 0.6], label 3 [0.75, 0.95].
/// On small grids make_phantom additionally clears voxels that lie within
/// two voxels (Chebyshev) of another band.
std::uint16_t nested_sphere_label(Dims dims, int x, int y, int z);

}  // namespace deadeye
