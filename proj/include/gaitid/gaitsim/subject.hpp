#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gaitid::gaitsim {

enum class LimbKind { torso, head, thigh, foot, arm };
enum class Side { center, left, right };

// One point scatterer hanging from an attachment point on the body. The limb
// swings as a pendulum in the sagittal plane:
//   angle(t) = swing_amplitude * sin(2*pi*f_gait*t + swing_phase + gait_phase)
struct Scatterer {
  std::string name;
  LimbKind kind = LimbKind::torso;
  Side side = Side::center;
  double attach_forward = 0.0;  // m, along the walking direction
  double attach_height = 0.0;   // m above ground
  double pivot_length = 0.0;    // m
  double swing_amplitude = 0.0; // rad
  double swing_phase = 0.0;     // rad
  double rcs = 1.0;             // relative amplitude

  bool operator==(const Scatterer&) const = default;
};

// Nominal physiology of one synthetic walker.
struct SubjectParams {
  int subject_id = 0;
  double gait_frequency = 1.0;  // full gait cycles per second
  double walking_speed = 1.2;   // m/s
  double torso_height = 1.1;    // m
  double leg_length = 0.9;      // hip height, m
  double arm_length = 0.6;      // shoulder to hand, m
  double leg_swing = 0.38;      // foot swing amplitude, rad
  double arm_swing = 0.25;      // rad
  double torso_rcs = 1.0;
  double head_rcs = 0.35;
  double thigh_rcs = 0.45;
  double foot_rcs = 0.25;
  double arm_rcs = 0.2;
};

struct SubjectModel {
  int subject_id = 0;
  double gait_frequency = 1.0;
  double walking_speed = 1.2;
  double torso_height = 1.1;
  std::vector<Scatterer> scatterers;

  bool operator==(const SubjectModel&) const = default;
};

// Relative per-seed perturbation applied to swing amplitudes and rcs values.
inline constexpr double kSubjectJitter = 0.10;

// Builds the 9-scatterer model (torso, head, thighs, feet, arms). Limb pairs
// share amplitude and are pi apart in phase; arms swing opposite to the leg on
// the same side. Different seeds perturb each pair's amplitude and rcs by up
// to +-10 % and its phase by up to +-0.1*pi.
SubjectModel build_subject(const SubjectParams& params, std::uint64_t seed);

void validate(const SubjectParams& params);

}  // namespace gaitid::gaitsim
