#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "gaitid/core/random.hpp"

namespace gaitid::metricnet {

// Endless stream of P x K batches. Classes are drawn round-robin from
// successive random permutations, so after any number of batches the visit
// counts of any two classes differ by at most one. Within a class, samples
// are drawn without replacement from a reshuffled pool.
class BalancedSampler {
 public:
  BalancedSampler(std::vector<int> labels, int classes_per_batch, int samples_per_class, std::uint64_t seed);

  // Dataset indices, grouped by class (K consecutive entries per class).
  std::vector<int> next();

  const std::vector<int>& classes() const { return classes_; }
  int batch_size() const { return p_ * k_; }

 private:
  void refill_order();
  std::vector<int> draw(std::size_t class_slot);

  std::vector<int> labels_;
  int p_;
  int k_;
  Rng rng_;
  std::vector<int> classes_;
  std::vector<std::vector<int>> members_;
  std::vector<std::deque<int>> pools_;
  std::deque<std::size_t> order_;
};

}  // namespace gaitid::metricnet
