#include "gaitid/metricnet/sampler.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "gaitid/core/error.hpp"

namespace gaitid::metricnet {

BalancedSampler::BalancedSampler(std::vector<int> labels, int classes_per_batch, int samples_per_class,
                                 std::uint64_t seed)
    : labels_(std::move(labels)), p_(classes_per_batch), k_(samples_per_class), rng_(seed) {
  require(p_ >= 2 && k_ >= 2, "sampler", "P and K must be at least 2");
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < labels_.size(); ++i) by_class[labels_[i]].push_back(static_cast<int>(i));
  require(static_cast<int>(by_class.size()) >= p_, "sampler",
          "need " + std::to_string(p_) + " classes, dataset has " + std::to_string(by_class.size()));
  for (auto& [label, idx] : by_class) {
    require(static_cast<int>(idx.size()) >= k_, "sampler",
            "class " + std::to_string(label) + " has " + std::to_string(idx.size()) + " samples, need " +
                std::to_string(k_));
    classes_.push_back(label);
    members_.push_back(std::move(idx));
  }
  pools_.resize(classes_.size());
}

void BalancedSampler::refill_order() {
  std::vector<std::size_t> perm(classes_.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng_.shuffle(perm.begin(), perm.end());
  order_.insert(order_.end(), perm.begin(), perm.end());
}

std::vector<int> BalancedSampler::draw(std::size_t slot) {
  auto& pool = pools_[slot];
  std::vector<int> out;
  while (static_cast<int>(out.size()) < k_) {
    if (pool.empty()) {
      std::vector<int> fresh;
      for (int i : members_[slot]) {
        if (std::find(out.begin(), out.end(), i) == out.end()) fresh.push_back(i);
      }
      rng_.shuffle(fresh.begin(), fresh.end());
      pool.assign(fresh.begin(), fresh.end());
    }
    out.push_back(pool.front());
    pool.pop_front();
  }
  return out;
}

std::vector<int> BalancedSampler::next() {
  std::vector<std::size_t> chosen;
  while (static_cast<int>(chosen.size()) < p_) {
    if (order_.empty()) refill_order();
    // A class already in this batch (possible across a permutation boundary)
    // is swapped with the next unused one; it keeps its place in the queue.
    auto it = std::find_if(order_.begin(), order_.end(), [&](std::size_t c) {
      return std::find(chosen.begin(), chosen.end(), c) == chosen.end();
    });
    if (it == order_.end()) {
      refill_order();
      continue;
    }
    chosen.push_back(*it);
    order_.erase(it);
  }
  std::vector<int> batch;
  batch.reserve(static_cast<std::size_t>(p_ * k_));
  for (std::size_t slot : chosen) {
    const auto d = draw(slot);
    batch.insert(batch.end(), d.begin(), d.end());
  }
  return batch;
}

}  // namespace gaitid::metricnet
