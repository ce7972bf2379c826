#include "gaitid/gaitsim/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gaitid::gaitsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Eigen::Vector3d array_axis_vector(ArrayAxis axis) {
  return axis == ArrayAxis::elevation ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
}

WalkingSubject::WalkingSubject(SubjectModel model, WalkScenario scenario)
    : model_(std::move(model)), scenario_(scenario) {
  scenario_.validate();
  const Eigen::Vector3d outward(std::sin(scenario_.aspect_angle), std::cos(scenario_.aspect_angle), 0.0);
  const Eigen::Vector3d near_point(0.0, scenario_.start_range, -scenario_.sensor_height);
  if (scenario_.direction == Direction::away) {
    start_ = near_point;
    heading_ = outward;
  } else {
    start_ = near_point + scenario_.radial_length * outward;
    heading_ = -outward;
  }
}

void WalkingSubject::states(double t, std::vector<ScattererState>& out) const {
  const double v = speed();
  const double f = gait_frequency();
  const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d ground = start_ + v * t * heading_;

  out.resize(model_.scatterers.size());
  for (std::size_t i = 0; i < model_.scatterers.size(); ++i) {
    const Scatterer& s = model_.scatterers[i];
    const double arg = kTwoPi * f * t + s.swing_phase + scenario_.gait_phase;
    const double gain = s.kind == LimbKind::arm                                   ? scenario_.arm_swing_factor
                        : (s.kind == LimbKind::thigh || s.kind == LimbKind::foot) ? scenario_.leg_swing_factor
                                                                                  : 1.0;
    const double amp = s.swing_amplitude * gain;
    const double angle = amp * std::sin(arg);
    const double rate = amp * kTwoPi * f * std::cos(arg);

    const Eigen::Vector3d attach = ground + s.attach_forward * heading_ + s.attach_height * up;
    const Eigen::Vector3d pos = attach + s.pivot_length * (std::sin(angle) * heading_ - std::cos(angle) * up);
    const Eigen::Vector3d vel = v * heading_ + s.pivot_length * rate * (std::cos(angle) * heading_ + std::sin(angle) * up);

    out[i].position = pos;
    out[i].radial_velocity = -vel.dot(pos.normalized());
    out[i].rcs = s.rcs;
  }
}

void PointTarget::states(double t, std::vector<ScattererState>& out) const {
  const double r = range0 - radial_velocity * t;
  const double theta = angle0 + angular_rate * t;
  out.resize(1);
  out[0].position = r * (std::sin(theta) * array_axis_vector(axis) + std::cos(theta) * Eigen::Vector3d::UnitY());
  out[0].radial_velocity = radial_velocity;
  out[0].rcs = rcs;
}

std::vector<ScattererState> scatterer_states(const SubjectModel& model, const WalkScenario& scenario, double t) {
  if (!(t >= 0.0 && t <= scenario.duration)) {
    throw std::out_of_range("t = " + std::to_string(t) + " s outside scenario [0, " +
                            std::to_string(scenario.duration) + "]");
  }
  std::vector<ScattererState> out;
  WalkingSubject(model, scenario).states(t, out);
  return out;
}

}  // namespace gaitid::gaitsim
