#pragma once

#include <string>

namespace gaitid::gaitsim {

enum class Direction { toward, away };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

// A straight walk of `radial_length` metres. The path's near end lies on the
// radar boresight at `start_range`; the path leaves it at `aspect_angle` from
// the line of sight. Toward walks end at the near point, away walks start there.
struct WalkScenario {
  double aspect_angle = 0.0;   // rad
  double start_range = 1.0;    // m
  double radial_length = 5.0;  // m
  double duration = 4.0;       // s
  Direction direction = Direction::toward;
  double sensor_height = 1.0;  // m, array phase centre above ground
  // Natural stride-to-stride variation of this particular walk.
  double speed_factor = 1.0;
  double cadence_factor = 1.0;
  double gait_phase = 0.0;  // rad
  double leg_swing_factor = 1.0;  // scales thigh and foot swing amplitudes
  double arm_swing_factor = 1.0;

  void validate() const;
};

}  // namespace gaitid::gaitsim
