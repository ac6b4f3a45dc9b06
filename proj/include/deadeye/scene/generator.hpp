#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deadeye/core/rng.hpp"
#include "deadeye/geometry/stereo.hpp"
#include "deadeye/scene/scene.hpp"

namespace deadeye {

/// Independent random streams: geometry fixes what the scenes look like,
/// order fixes the presentation sequence.
struct SeedPair {
  std::uint64_t geometry = 0;
  std::uint64_t order = 0;

  static SeedPair from(std::uint64_t rng_seed);
};

/// The canonical viewer the scene layout is built for.
StereoRig default_rig();

/// Shape and color for `count` objects, drawn from the set kind's palette.
std::vector<std::pair<Shape, Rgb8>> assign_appearance(const SetConfig& config, Rng& rng, int count);

/// Builds scene `index` of a set. Rejection-samples layouts until the
/// occlusion caps hold; throws a generation error naming the index when the
/// retry bound is exhausted.
TrialScene generate_scene(const SetConfig& config, std::uint64_t geometry_seed, int index, bool with_target);

/// Full set: scenes_per_set scenes, target_count() of them with a target,
/// shuffled by the order stream.
std::vector<TrialScene> generate_set(const SetConfig& config, unsigned threads = 1);
std::vector<TrialScene> generate_set(const SetConfig& config, SeedPair seeds, unsigned threads = 1);

/// Config for the training round that precedes a set.
SetConfig training_config(const SetConfig& config);

/// Fraction of an object's solo footprint hidden by other objects in the
/// given view at the given resolution.
double occlusion_fraction(const TrialScene& scene, std::size_t object_index, const EyeView& view, ImageSize resolution);

struct OcclusionMeasure {
  double fraction = 0.0;
  long long solo_pixels = 0;
  int footprint_width = 0;  // pixel columns spanned by the solo footprint
};

/// Occlusion of every object in one view; objects whose screen bounds meet
/// no other object's bounds are reported unoccluded without rasterizing.
std::vector<OcclusionMeasure> measure_occlusion(const TrialScene& scene, const EyeView& view);

/// Allowed occlusion for an object on a plane.
double occlusion_cap(const SetConfig& config, int depth_plane);

struct Violation {
  std::string check;
  std::optional<std::size_t> object;
  double measured = 0.0;
  double expected = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& check) const;
};

inline constexpr double kAngularSizeTolerance = 0.01;
inline constexpr double kGridAngleTolerance = 0.05;

ValidationReport validate_scene(const TrialScene& scene, const SetConfig& config, const StereoRig& rig);

}  // namespace deadeye
