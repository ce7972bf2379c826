#include "gaitid/gaitsim/subject.hpp"

#include <numbers>

#include "gaitid/core/error.hpp"
#include "gaitid/core/random.hpp"

namespace gaitid::gaitsim {

namespace {

constexpr double kPi = std::numbers::pi;

void check_range(double v, double lo, double hi, const char* key) {
  require(v >= lo && v <= hi, key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

void validate(const SubjectParams& p) {
  check_range(p.gait_frequency, 0.6, 1.4, "gait_frequency");
  check_range(p.walking_speed, 0.8, 2.0, "walking_speed");
  check_range(p.leg_length, 0.5, 1.2, "leg_length");
  check_range(p.torso_height, p.leg_length + 0.05, 1.6, "torso_height");
  check_range(p.arm_length, 0.3, 0.9, "arm_length");
  check_range(p.leg_swing, 0.05, 0.8, "leg_swing");
  check_range(p.arm_swing, 0.0, 0.75 * p.leg_swing, "arm_swing");
  for (auto [v, key] : {std::pair{p.torso_rcs, "torso_rcs"}, {p.head_rcs, "head_rcs"}, {p.thigh_rcs, "thigh_rcs"},
                        {p.foot_rcs, "foot_rcs"}, {p.arm_rcs, "arm_rcs"}}) {
    require(v > 0, key, "must be positive");
  }
}

SubjectModel build_subject(const SubjectParams& p, std::uint64_t seed) {
  validate(p);
  Rng rng(seed);
  auto scale = [&] { return 1.0 + rng.uniform(-kSubjectJitter, kSubjectJitter); };
  auto shift = [&] { return rng.uniform(-kSubjectJitter, kSubjectJitter) * kPi; };

  SubjectModel m;
  m.subject_id = p.subject_id;
  m.gait_frequency = p.gait_frequency;
  m.walking_speed = p.walking_speed;
  m.torso_height = p.torso_height;

  const double hip = p.leg_length;
  const double shoulder = p.torso_height + 0.4;
  m.scatterers.push_back({"torso", LimbKind::torso, Side::center, 0.0, p.torso_height, 0.0, 0.0, 0.0,
                          p.torso_rcs * scale()});
  m.scatterers.push_back({"head", LimbKind::head, Side::center, 0.0, p.torso_height + 0.6, 0.0, 0.0, 0.0,
                          p.head_rcs * scale()});

  // Jitter draws happen in a fixed order so a given seed always yields the same model.
  const double leg_phase = shift();
  const double leg_amp = p.leg_swing * scale();
  const double thigh_amp = 0.75 * p.leg_swing * scale();
  const double thigh_rcs = p.thigh_rcs * scale();
  const double foot_rcs = p.foot_rcs * scale();
  const double arm_phase = shift();
  const double arm_amp = p.arm_swing * scale();
  const double arm_rcs = p.arm_rcs * scale();

  for (auto [side, offset] : {std::pair{Side::left, 0.0}, {Side::right, kPi}}) {
    const std::string tag = side == Side::left ? "left" : "right";
    m.scatterers.push_back({tag + "_thigh", LimbKind::thigh, side, 0.0, hip, 0.5 * p.leg_length, thigh_amp,
                            leg_phase + offset, thigh_rcs});
    m.scatterers.push_back(
        {tag + "_foot", LimbKind::foot, side, 0.0, hip, p.leg_length, leg_amp, leg_phase + offset, foot_rcs});
    // Arms counter-swing against the leg on the same side.
    m.scatterers.push_back({tag + "_arm", LimbKind::arm, side, 0.0, shoulder, 0.9 * p.arm_length, arm_amp,
                            leg_phase + arm_phase + offset + kPi, arm_rcs});
  }
  return m;
}

}  // namespace gaitid::gaitsim
