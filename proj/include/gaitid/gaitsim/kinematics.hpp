#pragma once

#include <Eigen/Core>
#include <vector>

#include "gaitid/gaitsim/radar_config.hpp"
#include "gaitid/gaitsim/scenario.hpp"
#include "gaitid/gaitsim/subject.hpp"

namespace gaitid::gaitsim {

// Radar frame: origin at the array phase centre, y along boresight, z up,
// x completing a right-handed frame.
struct ScattererState {
  Eigen::Vector3d position;
  double radial_velocity = 0.0;  // m/s, positive when approaching
  double rcs = 1.0;
};

class MotionModel {
 public:
  virtual ~MotionModel() = default;
  virtual double duration() const = 0;
  // Replaces `out` with the scatterer states at time t (no range check).
  virtual void states(double t, std::vector<ScattererState>& out) const = 0;
};

class WalkingSubject final : public MotionModel {
 public:
  WalkingSubject(SubjectModel model, WalkScenario scenario);

  double duration() const override { return scenario_.duration; }
  void states(double t, std::vector<ScattererState>& out) const override;

  const SubjectModel& model() const { return model_; }
  const WalkScenario& scenario() const { return scenario_; }
  double speed() const { return model_.walking_speed * scenario_.speed_factor; }
  double gait_frequency() const { return model_.gait_frequency * scenario_.cadence_factor; }
  // Unit walking direction in the radar frame.
  const Eigen::Vector3d& heading() const { return heading_; }

 private:
  SubjectModel model_;
  WalkScenario scenario_;
  Eigen::Vector3d start_;
  Eigen::Vector3d heading_;
};

// A single scatterer at range R(t) = range0 - radial_velocity*t seen under
// angle(t) = angle0 + angular_rate*t in the plane spanned by boresight and
// the array axis.
struct PointTarget final : public MotionModel {
  double range0 = 3.0;
  double radial_velocity = 0.0;
  double angle0 = 0.0;
  double angular_rate = 0.0;
  double rcs = 1.0;
  double length_s = 1.0;
  ArrayAxis axis = ArrayAxis::elevation;

  double duration() const override { return length_s; }
  void states(double t, std::vector<ScattererState>& out) const override;
};

// Unit vector of the array axis in the radar frame.
Eigen::Vector3d array_axis_vector(ArrayAxis axis);

// Throws std::out_of_range unless 0 <= t <= scenario.duration.
std::vector<ScattererState> scatterer_states(const SubjectModel& model, const WalkScenario& scenario, double t);

}  // namespace gaitid::gaitsim
