#include "gaitid/gaitsim/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaitid/core/error.hpp"
#include "gaitid/core/random.hpp"

namespace gaitid::gaitsim {

namespace {

// Latin-hypercube column: n values in [lo, hi], one per stratum, randomly ordered.
std::vector<double> stratified(int n, double lo, double hi, Rng& rng) {
  std::vector<int> strata(static_cast<std::size_t>(n));
  std::iota(strata.begin(), strata.end(), 0);
  rng.shuffle(strata.begin(), strata.end());
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * (strata[i] + rng.uniform()) / n;
  return out;
}

}  // namespace

std::uint64_t capture_seed(std::uint64_t cohort_seed, int subject_id, std::size_t scenario_index) {
  return split_seed(split_seed(cohort_seed, 0x5343454EULL + static_cast<std::uint64_t>(subject_id)), scenario_index);
}

std::vector<CohortMember> standard_cohort(int n_subjects, double minutes, std::uint64_t seed) {
  require(n_subjects >= 2 && n_subjects <= 32, "cohort.n_subjects", "must lie in [2, 32]");
  require(minutes > 0, "cohort.minutes", "must be positive");

  Rng rng(split_seed(seed, 0xC0407ULL));
  const auto cadence = stratified(n_subjects, 0.85, 1.10, rng);
  const auto stride = stratified(n_subjects, 1.15, 1.45, rng);
  const auto legs = stratified(n_subjects, 0.80, 0.98, rng);
  const auto trunk = stratified(n_subjects, 0.15, 0.28, rng);
  const auto arms = stratified(n_subjects, 0.18, 0.30, rng);
  const auto bulk = stratified(n_subjects, 0.8, 1.2, rng);

  std::vector<CohortMember> cohort;
  cohort.reserve(static_cast<std::size_t>(n_subjects));
  for (int i = 0; i < n_subjects; ++i) {
    SubjectParams p;
    p.subject_id = i;
    p.gait_frequency = cadence[i];
    p.walking_speed = std::clamp(cadence[i] * stride[i], 0.8, 2.0);
    p.leg_length = legs[i];
    p.torso_height = legs[i] + trunk[i];
    p.arm_length = 0.65 * p.leg_length + 0.05;
    // Foot excursion 2*L*sin(A) spans one step (half a stride).
    p.leg_swing = std::asin(std::min(0.95, stride[i] / (4.0 * p.leg_length)));
    p.arm_swing = std::min(arms[i], 0.75 * p.leg_swing);
    p.thigh_rcs *= bulk[i];
    p.foot_rcs *= rng.uniform(0.8, 1.2);
    p.arm_rcs *= rng.uniform(0.8, 1.2);
    p.head_rcs *= rng.uniform(0.8, 1.2);

    CohortMember member;
    member.model = build_subject(p, split_seed(seed, 0x5B1ULL + static_cast<std::uint64_t>(i)));

    Rng walk_rng(split_seed(seed, 0x3A1CULL + static_cast<std::uint64_t>(i)));
    const double target = minutes * 60.0;
    double total = 0.0;
    for (std::size_t k = 0; total < target; ++k) {
      WalkScenario s;
      s.direction = (k % 2 == 0) ? Direction::toward : Direction::away;
      s.aspect_angle = kStandardAspects[(k / 2) % kStandardAspects.size()];
      s.speed_factor = walk_rng.uniform(1.0 - kWalkVariation, 1.0 + kWalkVariation);
      s.cadence_factor = walk_rng.uniform(1.0 - kWalkVariation, 1.0 + kWalkVariation);
      s.gait_phase = walk_rng.uniform(0.0, 2.0 * std::numbers::pi);
      s.leg_swing_factor = walk_rng.uniform(1.0 - kWalkVariation, 1.0 + kWalkVariation);
      s.arm_swing_factor = walk_rng.uniform(1.0 - 2 * kWalkVariation, 1.0 + 2 * kWalkVariation);
      s.duration = s.radial_length / (member.model.walking_speed * s.speed_factor);
      total += s.duration;
      member.scenarios.push_back(s);
    }
    cohort.push_back(std::move(member));
  }
  return cohort;
}

}  // namespace gaitid::gaitsim
