#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <vector>

#include "gaitid/gaitsim/scenario.hpp"
#include "gaitid/gaitsim/subject.hpp"

namespace gaitid::gaitsim {

inline constexpr double kDeg = std::numbers::pi / 180.0;
inline constexpr std::array<double, 7> kStandardAspects = {0.0,        10 * kDeg,  -10 * kDeg, 30 * kDeg,
                                                           -30 * kDeg, 50 * kDeg, -50 * kDeg};

// Half-width of the per-walk speed, cadence and leg-swing factors (arm swing
// varies twice as much).
inline constexpr double kWalkVariation = 0.05;

struct CohortMember {
  SubjectModel model;
  std::vector<WalkScenario> scenarios;
};

// Synthetic stand-in for a recorded cohort. Subject physiology is drawn by
// stratified sampling so the cohort spans the population ranges evenly;
// scenarios alternate direction and cycle through kStandardAspects until the
// per-subject walking time reaches `minutes`.
std::vector<CohortMember> standard_cohort(int n_subjects, double minutes, std::uint64_t seed);

// Seed of the noise stream for one capture of a cohort.
std::uint64_t capture_seed(std::uint64_t cohort_seed, int subject_id, std::size_t scenario_index);

}  // namespace gaitid::gaitsim
