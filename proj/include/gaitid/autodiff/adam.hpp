#pragma once

#include <cstdint>
#include <vector>

#include "gaitid/autodiff/tensor.hpp"

namespace gaitid::autodiff {

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

template <typename T>
struct AdamState {
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
  std::int64_t step = 0;
};

// Bias-corrected Adam update of every parameter from its accumulated grad.
// Moments start at zero and are sized on first use.
template <typename T>
void adam_step(ParameterSet<T>& params, AdamState<T>& state, const AdamParams& hp);

}  // namespace gaitid::autodiff
