#pragma once

#include <span>
#include <string>

#include "deadeye/geometry/solids.hpp"
#include "deadeye/geometry/stereo.hpp"

namespace deadeye {

/// Ecological classification of where a point's image lands in the two eyes.
/// `hidden` covers points neither eye receives.
enum class MonocularZone {
  binocular,
  valid_left_only,
  valid_right_only,
  invalid_left_only,
  invalid_right_only,
  hidden,
};

const char* to_string(MonocularZone zone);

/// Which eyes the point is drawn for; a Deadeye target is drawn for one eye.
enum class Presentation { both, left_only, right_only };

/// Mirror image of a classification under a left/right swap.
MonocularZone mirrored(MonocularZone zone);

/// A point seen by exactly one eye is ecologically valid when the other eye's
/// line of sight is physically blocked by an occluder in front of the point,
/// and invalid when the missing image has no occluding cause.
MonocularZone classify_monocular_zone(const Vec3& point, std::span<const Solid> occluders, const StereoRig& rig,
                                      Presentation presentation = Presentation::both);

}  // namespace deadeye
