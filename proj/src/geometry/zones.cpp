#include "deadeye/geometry/zones.hpp"

#include <algorithm>

namespace deadeye {

const char* to_string(MonocularZone zone) {
  switch (zone) {
    case MonocularZone::binocular: return "binocular";
    case MonocularZone::valid_left_only: return "valid_left_only";
    case MonocularZone::valid_right_only: return "valid_right_only";
    case MonocularZone::invalid_left_only: return "invalid_left_only";
    case MonocularZone::invalid_right_only: return "invalid_right_only";
    case MonocularZone::hidden: return "hidden";
  }
  return "unknown";
}

MonocularZone mirrored(MonocularZone zone) {
  switch (zone) {
    case MonocularZone::valid_left_only: return MonocularZone::valid_right_only;
    case MonocularZone::valid_right_only: return MonocularZone::valid_left_only;
    case MonocularZone::invalid_left_only: return MonocularZone::invalid_right_only;
    case MonocularZone::invalid_right_only: return MonocularZone::invalid_left_only;
    default: return zone;
  }
}

MonocularZone classify_monocular_zone(const Vec3& point, std::span<const Solid> occluders, const StereoRig& rig,
                                      Presentation presentation) {
  const RigFrame frame = rig_frame(rig);
  const double half = 0.5 * rig.eye_separation;
  const Vec3 left_eye = rig.head_position - frame.right * half;
  const Vec3 right_eye = rig.head_position + frame.right * half;

  auto blocked = [&](const Vec3& eye) {
    return std::any_of(occluders.begin(), occluders.end(),
                       [&](const Solid& s) { return blocks_segment(s, eye, point); });
  };
  const bool left_blocked = blocked(left_eye);
  const bool right_blocked = blocked(right_eye);
  const bool left_sees = presentation != Presentation::right_only && !left_blocked;
  const bool right_sees = presentation != Presentation::left_only && !right_blocked;

  if (left_sees && right_sees) return MonocularZone::binocular;
  if (left_sees) return right_blocked ? MonocularZone::valid_left_only : MonocularZone::invalid_left_only;
  if (right_sees) return left_blocked ? MonocularZone::valid_right_only : MonocularZone::invalid_right_only;
  return MonocularZone::hidden;
}

}  // namespace deadeye
