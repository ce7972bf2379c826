#include "gaitid/gaitsim/scenario.hpp"

#include <cmath>
#include <numbers>

#include "gaitid/core/error.hpp"

namespace gaitid::gaitsim {

std::string to_string(Direction d) { return d == Direction::toward ? "toward" : "away"; }

Direction direction_from_string(const std::string& s) {
  if (s == "toward") return Direction::toward;
  if (s == "away") return Direction::away;
  throw ValidationError("direction", "expected \"toward\" or \"away\", got \"" + s + "\"");
}

void WalkScenario::validate() const {
  require(start_range > 0, "scenario.start_range", "must be positive");
  require(radial_length > 0, "scenario.radial_length", "must be positive");
  require(duration > 0, "scenario.duration", "must be positive");
  require(std::abs(aspect_angle) < std::numbers::pi / 2, "scenario.aspect_angle", "must lie in (-90, 90) deg");
  require(sensor_height > 0, "scenario.sensor_height", "must be positive");
  require(speed_factor > 0, "scenario.speed_factor", "must be positive");
  require(cadence_factor > 0, "scenario.cadence_factor", "must be positive");
  require(leg_swing_factor > 0, "scenario.leg_swing_factor", "must be positive");
  require(arm_swing_factor >= 0, "scenario.arm_swing_factor", "must be non-negative");
}

}  // namespace gaitid::gaitsim
