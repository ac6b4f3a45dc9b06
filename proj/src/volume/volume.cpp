#include "deadeye/volume/volume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "deadeye/core/error.hpp"
#include "deadeye/core/image.hpp"

namespace deadeye {

VolumeGrid::VolumeGrid(Dims d, Vec3 spacing_mm, int bits, double vmin, double vmax)
    : dims(d), spacing(spacing_mm), bit_depth(bits), scalars(d.count(), 0), value_min(vmin), value_max(vmax) {
  check();
}

Vec3 VolumeGrid::voxel_center(int x, int y, int z) const {
  return {(x - 0.5 * (dims.nx - 1)) * spacing.x, (y - 0.5 * (dims.ny - 1)) * spacing.y,
          (z - 0.5 * (dims.nz - 1)) * spacing.z};
}

Vec3 VolumeGrid::to_voxel(const Vec3& w) const {
  return {w.x / spacing.x + 0.5 * (dims.nx - 1), w.y / spacing.y + 0.5 * (dims.ny - 1),
          w.z / spacing.z + 0.5 * (dims.nz - 1)};
}

Vec3 VolumeGrid::extent() const { return {dims.nx * spacing.x, dims.ny * spacing.y, dims.nz * spacing.z}; }

double VolumeGrid::min_spacing() const { return std::min({spacing.x, spacing.y, spacing.z}); }

void VolumeGrid::check() const {
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) throw Error(ErrorKind::contract, "volume dims must be >= 1");
  if (!(spacing.x > 0.0 && spacing.y > 0.0 && spacing.z > 0.0)) {
    throw Error(ErrorKind::contract, "voxel spacing must be positive");
  }
  if (bit_depth != 8 && bit_depth != 16) throw Error(ErrorKind::contract, "bit depth must be 8 or 16");
  if (scalars.size() != dims.count()) throw Error(ErrorKind::contract, "scalar count does not match dims");
  const double top = bit_depth == 8 ? 255.0 : 65535.0;
  if (!(value_min >= 0.0 && value_min < value_max && value_max <= top)) {
    throw Error(ErrorKind::contract, "value range inconsistent with bit depth");
  }
}

MaskVolume::MaskVolume(Dims dims, bool value) : dims_(dims), words_((dims.count() + 63) / 64, 0) {
  if (value) {
    for (std::size_t i = 0; i < dims.count(); ++i) set(i, true);
  }
}

void MaskVolume::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

std::size_t MaskVolume::popcount() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t brush_erase(MaskVolume& mask, const Vec3& center, double radius, const VolumeGrid& grid, BrushMode mode) {
  if (!(radius > 0.0)) throw Error(ErrorKind::domain, "brush radius must be positive");
  if (!(mask.dims() == grid.dims)) throw Error(ErrorKind::contract, "mask dims do not match the volume");
  const Vec3 c = grid.to_voxel(center);
  auto range = [&](double cv, double s, int n, int& lo, int& hi) {
    lo = std::max(0, static_cast<int>(std::floor(cv - radius / s)));
    hi = std::min(n - 1, static_cast<int>(std::ceil(cv + radius / s)));
  };
  int x0, x1, y0, y1, z0, z1;
  range(c.x, grid.spacing.x, grid.dims.nx, x0, x1);
  range(c.y, grid.spacing.y, grid.dims.ny, y0, y1);
  range(c.z, grid.spacing.z, grid.dims.nz, z0, z1);
  const double r2 = radius * radius;
  const bool value = mode == BrushMode::set;
  std::size_t changed = 0;
  for (int z = z0; z <= z1; ++z) {
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Vec3 d = grid.voxel_center(x, y, z) - center;
        if (dot(d, d) > r2) continue;
        const std::size_t i = grid.dims.index(x, y, z);
        if (mask.get(i) != value) {
          mask.set(i, value);
          ++changed;
        }
      }
    }
  }
  return changed;
}

SegmentMask mask_from_segment(const LabelVolume& segments, std::uint16_t id) {
  if (segments.labels.size() != segments.dims.count()) throw Error(ErrorKind::contract, "label count does not match dims");
  SegmentMask out{MaskVolume(segments.dims), true};
  for (std::size_t i = 0; i < segments.labels.size(); ++i) {
    if (segments.labels[i] == id) {
      out.mask.set(i, true);
      out.id_absent = false;
    }
  }
  return out;
}

MaskVolume dilate(const MaskVolume& mask, int radius) {
  const Dims d = mask.dims();
  MaskVolume out(d);
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        if (!mask.get(x, y, z)) continue;
        for (int zz = std::max(0, z - radius); zz <= std::min(d.nz - 1, z + radius); ++zz) {
          for (int yy = std::max(0, y - radius); yy <= std::min(d.ny - 1, y + radius); ++yy) {
            for (int xx = std::max(0, x - radius); xx <= std::min(d.nx - 1, x + radius); ++xx) {
              out.set(xx, yy, zz, true);
            }
          }
        }
      }
    }
  }
  return out;
}

// ---- transfer functions ----

std::array<double, 4> TransferFunction::evaluate(double s) const {
  if (points.empty()) return {0, 0, 0, 0};
  if (s <= points.front().scalar) return points.front().rgba;
  if (s >= points.back().scalar) return points.back().rgba;
  const auto hi = std::upper_bound(points.begin(), points.end(), s,
                                   [](double v, const TransferPoint& p) { return v < p.scalar; });
  const auto lo = hi - 1;
  const double t = (s - lo->scalar) / (hi->scalar - lo->scalar);
  std::array<double, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = lo->rgba[k] + (hi->rgba[k] - lo->rgba[k]) * t;
  return out;
}

void TransferFunction::check() const {
  if (points.size() < 2) throw Error(ErrorKind::configuration, "transfer function needs at least two points");
  if (!(reference_step > 0.0)) throw Error(ErrorKind::configuration, "reference step must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i].scalar > points[i - 1].scalar)) {
      throw Error(ErrorKind::configuration, "transfer function scalars must be strictly increasing");
    }
    for (double c : points[i].rgba) {
      if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::configuration, "transfer function components must be in [0, 1]");
    }
  }
}

void TransferFunction::check(double value_min, double value_max) const {
  check();
  if (points.front().scalar > value_min || points.back().scalar < value_max) {
    throw Error(ErrorKind::configuration, "transfer function does not cover the volume value range");
  }
}

TransferFunction TransferFunction::parse(const std::string& text) {
  TransferFunction tf;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    TransferPoint p{};
    if (!(fields >> p.scalar)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(ErrorKind::format, "transfer function line " + std::to_string(line_no) + ": expected a scalar");
    }
    std::string extra;
    if (!(fields >> p.rgba[0] >> p.rgba[1] >> p.rgba[2] >> p.rgba[3]) || (fields >> extra)) {
      throw Error(ErrorKind::format, "transfer function line " + std::to_string(line_no) + ": expected 'scalar r g b a'");
    }
    tf.points.push_back(p);
  }
  tf.check();
  return tf;
}

TransferFunction TransferFunction::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::string TransferFunction::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const TransferPoint& p : points) {
    out << p.scalar << ' ' << p.rgba[0] << ' ' << p.rgba[1] << ' ' << p.rgba[2] << ' ' << p.rgba[3] << '\n';
  }
  return out.str();
}

TransferFunction TransferFunction::greyscale(double lo, double hi) {
  const double r = hi - lo;
  return {{{lo, {0, 0, 0, 0}},
           {lo + 0.15 * r, {0.3, 0.3, 0.3, 0.0}},
           {lo + 0.5 * r, {0.7, 0.7, 0.7, 0.06}},
           {hi, {1, 1, 1, 0.25}}}};
}

TransferFunction TransferFunction::colored(double lo, double hi) {
  const double r = hi - lo;
  return {{{lo, {0, 0, 0, 0}},
           {lo + 0.2 * r, {0.9, 0.3, 0.2, 0.01}},
           {lo + 0.5 * r, {0.95, 0.8, 0.4, 0.04}},
           {lo + 0.75 * r, {0.4, 0.7, 1.0, 0.08}},
           {hi, {1, 1, 1, 0.15}}}};
}

// ---- raw files ----

namespace {

struct RawHeader {
  Dims dims;
  Vec3 spacing{1, 1, 1};
  int bits = 0;
  double value_min = 0;
  double value_max = 0;
  std::filesystem::path data;
};

RawHeader read_header(const std::filesystem::path& header_path) {
  std::istringstream in(read_file(header_path));
  RawHeader h;
  std::string line;
  bool magic = false, have_dims = false, have_bits = false, have_data = false;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    std::string key;
    if (!(f >> key) || key[0] == '#') continue;
    bool ok = true;
    if (key == "deadeye-raw") {
      int version = 0;
      ok = static_cast<bool>(f >> version);
      if (ok && version != 1) throw Error(ErrorKind::format, "unsupported raw header version " + std::to_string(version));
      magic = true;
    } else if (key == "dims") {
      ok = static_cast<bool>(f >> h.dims.nx >> h.dims.ny >> h.dims.nz);
      have_dims = true;
    } else if (key == "spacing") {
      ok = static_cast<bool>(f >> h.spacing.x >> h.spacing.y >> h.spacing.z);
    } else if (key == "bits") {
      ok = static_cast<bool>(f >> h.bits);
      have_bits = true;
    } else if (key == "range") {
      ok = static_cast<bool>(f >> h.value_min >> h.value_max);
    } else if (key == "data") {
      std::string name;
      ok = static_cast<bool>(f >> name);
      h.data = header_path.parent_path() / name;
      have_data = true;
    } else {
      throw Error(ErrorKind::format, "unknown raw header key '" + key + "'");
    }
    if (!ok) throw Error(ErrorKind::format, "malformed raw header line '" + line + "'");
  }
  if (!magic || !have_dims || !have_bits || !have_data) {
    throw Error(ErrorKind::format, "raw header needs deadeye-raw, dims, bits and data lines");
  }
  if (h.dims.nx < 1 || h.dims.ny < 1 || h.dims.nz < 1) throw Error(ErrorKind::format, "raw header dims must be >= 1");
  return h;
}

std::string header_text(Dims d, const Vec3& spacing, int bits, double vmin, double vmax, const std::string& data) {
  std::ostringstream out;
  out.precision(17);
  out << "deadeye-raw 1\n"
      << "dims " << d.nx << ' ' << d.ny << ' ' << d.nz << '\n'
      << "spacing " << spacing.x << ' ' << spacing.y << ' ' << spacing.z << '\n'
      << "bits " << bits << '\n'
      << "range " << vmin << ' ' << vmax << '\n'
      << "data " << data << '\n';
  return out.str();
}

std::filesystem::path data_path_for(const std::filesystem::path& header_path, const char* ext) {
  std::filesystem::path p = header_path;
  p.replace_extension(ext);
  return p;
}

}  // namespace

VolumeGrid load_raw_volume(const std::filesystem::path& header_path) {
  const RawHeader h = read_header(header_path);
  if (h.bits != 8 && h.bits != 16) throw Error(ErrorKind::format, "unknown bit depth " + std::to_string(h.bits));
  const std::string bytes = read_file(h.data);
  const std::size_t want = h.dims.count() * static_cast<std::size_t>(h.bits / 8);
  if (bytes.size() != want) {
    throw Error(ErrorKind::format, "raw size mismatch: expected " + std::to_string(want) + " bytes, file has " +
                                       std::to_string(bytes.size()));
  }
  VolumeGrid g;
  g.dims = h.dims;
  g.spacing = h.spacing;
  g.bit_depth = h.bits;
  g.value_min = h.value_min;
  g.value_max = h.value_max;
  g.scalars.resize(h.dims.count());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < g.scalars.size(); ++i) {
    g.scalars[i] = h.bits == 8 ? p[i] : static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8));
  }
  g.check();
  return g;
}

void save_raw_volume(const std::filesystem::path& header_path, const VolumeGrid& grid) {
  grid.check();
  const std::filesystem::path data = data_path_for(header_path, ".raw");
  std::string bytes;
  bytes.reserve(grid.scalars.size() * (grid.bit_depth / 8));
  for (std::uint16_t v : grid.scalars) {
    bytes.push_back(static_cast<char>(v & 0xff));
    if (grid.bit_depth == 16) bytes.push_back(static_cast<char>(v >> 8));
  }
  write_file(data, bytes);
  write_file(header_path,
             header_text(grid.dims, grid.spacing, grid.bit_depth, grid.value_min, grid.value_max, data.filename().string()));
}

MaskVolume load_mask(const std::filesystem::path& header_path) {
  const RawHeader h = read_header(header_path);
  if (h.bits != 1) throw Error(ErrorKind::format, "mask header must declare bits 1");
  const std::string bytes = read_file(h.data);
  const std::size_t want = (h.dims.count() + 7) / 8;
  if (bytes.size() != want) {
    throw Error(ErrorKind::format, "mask size mismatch: expected " + std::to_string(want) + " bytes, file has " +
                                       std::to_string(bytes.size()));
  }
  MaskVolume m(h.dims);
  for (std::size_t i = 0; i < h.dims.count(); ++i) {
    if ((static_cast<unsigned char>(bytes[i >> 3]) >> (i & 7)) & 1u) m.set(i, true);
  }
  return m;
}

void save_mask(const std::filesystem::path& header_path, const MaskVolume& mask, const Vec3& spacing) {
  const std::filesystem::path data = data_path_for(header_path, ".bits");
  std::string bytes((mask.dims().count() + 7) / 8, '\0');
  for (std::size_t i = 0; i < mask.dims().count(); ++i) {
    if (mask.get(i)) bytes[i >> 3] = static_cast<char>(static_cast<unsigned char>(bytes[i >> 3]) | (1u << (i & 7)));
  }
  write_file(data, bytes);
  write_file(header_path, header_text(mask.dims(), spacing, 1, 0, 1, data.filename().string()));
}

// ---- phantoms ----

const char* to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::nested_spheres: return "nested_spheres";
    case PhantomKind::gradient_block: return "gradient_block";
    case PhantomKind::tube_tangle: return "tube_tangle";
  }
  return "unknown";
}

PhantomKind phantom_kind_from_string(const std::string& text) {
  for (PhantomKind k : {PhantomKind::nested_spheres, PhantomKind::gradient_block, PhantomKind::tube_tangle}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorKind::format, "unknown phantom '" + text + "'");
}

namespace {

constexpr double kPhantomMax = 4095.0;
constexpr double kShellInner[3] = {0.0, 0.35, 0.75};
constexpr double kShellOuter[3] = {0.2, 0.6, 0.95};

// Normalized voxel coordinates: the largest centered sphere has radius 1.
struct Normalizer {
  Dims d;
  double half;
  explicit Normalizer(Dims dims) : d(dims), half(0.5 * std::min({dims.nx, dims.ny, dims.nz})) {}
  Vec3 operator()(int x, int y, int z) const {
    return {(x - 0.5 * (d.nx - 1)) / half, (y - 0.5 * (d.ny - 1)) / half, (z - 0.5 * (d.nz - 1)) / half};
  }
};

// Smooth bump on [0, 1]: zero at both ends, one in the middle.
double bump(double t) {
  const double s = std::sin(kPi * std::clamp(t, 0.0, 1.0));
  return s * s;
}

// Falls smoothly from 1 on the axis to 0 at the tube wall.
double tube_profile(double dist, double radius) {
  const double u = 1.0 - (dist / radius) * (dist / radius);
  return u * u;
}

double torus_distance(const Vec3& p, double cx, bool xy_plane, double major) {
  const double a = p.x - cx;
  const double b = xy_plane ? p.y : p.z;
  const double off = xy_plane ? p.z : p.y;
  const double q = std::sqrt(a * a + b * b) - major;
  return std::sqrt(q * q + off * off);
}

// The shapes are laid out in normalized units, so on small grids two segments
// can come closer than `gap` empty voxels. Clears every labeled voxel that has
// a differently labeled voxel within Chebyshev distance `gap`; any two
// survivors of different segments are then more than `gap` apart.
void separate_segments(Phantom& ph, int gap) {
  const Dims d = ph.labels.dims;
  std::vector<std::size_t> clear;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        const std::uint16_t own = ph.labels.at(x, y, z);
        if (own == 0) continue;
        bool near_other = false;
        for (int k = std::max(0, z - gap); k <= std::min(d.nz - 1, z + gap) && !near_other; ++k) {
          for (int j = std::max(0, y - gap); j <= std::min(d.ny - 1, y + gap) && !near_other; ++j) {
            for (int i = std::max(0, x - gap); i <= std::min(d.nx - 1, x + gap); ++i) {
              const std::uint16_t other = ph.labels.at(i, j, k);
              if (other != 0 && other != own) {
                near_other = true;
                break;
              }
            }
          }
        }
        if (near_other) clear.push_back(d.index(x, y, z));
      }
    }
  }
  for (std::size_t i : clear) {
    ph.labels.labels[i] = 0;
    ph.grid.scalars[i] = 0;
  }
}

}  // namespace

std::uint16_t nested_sphere_label(Dims dims, int x, int y, int z) {
  const double r = length(Normalizer(dims)(x, y, z));
  for (int k = 1; k <= 3; ++k) {
    if (r >= kShellInner[k - 1] && r <= kShellOuter[k - 1]) return static_cast<std::uint16_t>(k);
  }
  return 0;
}

Phantom make_phantom(PhantomKind kind, Dims dims) {
  if (dims.nx < 8 || dims.ny < 8 || dims.nz < 8) throw Error(ErrorKind::domain, "phantom dims must be >= 8");
  Phantom ph;
  ph.grid = VolumeGrid(dims, {1.0, 1.0, 1.0}, 16, 0.0, kPhantomMax);
  ph.labels.dims = dims;
  ph.labels.labels.assign(dims.count(), 0);
  const Normalizer norm(dims);

  for (int z = 0; z < dims.nz; ++z) {
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x) {
        const Vec3 p = norm(x, y, z);
        std::uint16_t label = 0;
        double value = 0.0;
        switch (kind) {
          case PhantomKind::nested_spheres: {
            label = nested_sphere_label(dims, x, y, z);
            if (label != 0) {
              const double r0 = kShellInner[label - 1], r1 = kShellOuter[label - 1];
              const double peak = 1.0 - 0.25 * (label - 1);
              // The core peaks at the center; shells peak mid-band.
              const double t = label == 1 ? 0.5 + 0.5 * length(p) / r1 : (length(p) - r0) / (r1 - r0);
              value = peak * bump(t);
            }
            break;
          }
          case PhantomKind::gradient_block: {
            const double r = length(p);
            const double face = 0.6 - std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
            if (r < 0.3) {
              label = 2;
              value = 0.9 * bump(0.5 + 0.5 * r / 0.3);
            } else if (r > 0.42 && face > 0.0) {
              label = 1;
              // Linear ramp along x, softened toward the faces and the cavity.
              const double ramp = 0.2 + 0.7 * (p.x + 0.6) / 1.2;
              const double soft = std::min({1.0, face / 0.15, (r - 0.42) / 0.1});
              value = ramp * soft * soft * (3.0 - 2.0 * soft);
            }
            break;
          }
          case PhantomKind::tube_tangle: {
            constexpr double radius = 0.12;
            const double da = torus_distance(p, -0.22, true, 0.38);
            const double db = torus_distance(p, 0.22, false, 0.38);
            const double dc = std::abs(p.x) < 0.7 ? std::hypot(p.y + 0.75, p.z) : 1e9;
            if (da < radius) {
              label = 1;
              value = 0.9 * tube_profile(da, radius);
            } else if (db < radius) {
              label = 2;
              value = 0.6 * tube_profile(db, radius);
            } else if (dc < radius) {
              label = 3;
              value = tube_profile(dc, radius);
            }
            break;
          }
        }
        const std::size_t i = dims.index(x, y, z);
        ph.labels.labels[i] = label;
        if (label != 0) ph.grid.scalars[i] = static_cast<std::uint16_t>(std::max(1.0, std::round(value * kPhantomMax)));
      }
    }
  }
  separate_segments(ph, 2);
  ph.segment_count = kind == PhantomKind::gradient_block ? 2 : 3;
  return ph;
}

}  // namespace deadeye
