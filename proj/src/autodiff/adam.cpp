#include "gaitid/autodiff/adam.hpp"

#include <cmath>

namespace gaitid::autodiff {

void AdamParams::validate() const {
  require(lr > 0, "net.optimizer.lr", "must be positive");
  require(beta1 >= 0 && beta1 < 1, "net.optimizer.beta1", "must lie in [0, 1)");
  require(beta2 >= 0 && beta2 < 1, "net.optimizer.beta2", "must lie in [0, 1)");
  require(eps > 0, "net.optimizer.eps", "must be positive");
}

template <typename T>
void adam_step(ParameterSet<T>& params, AdamState<T>& state, const AdamParams& hp) {
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), {});
    state.v.assign(params.size(), {});
    for (std::size_t i = 0; i < params.size(); ++i) {
      state.m[i].assign(params[i].value.size(), T(0));
      state.v[i].assign(params[i].value.size(), T(0));
    }
    state.step = 0;
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t k = 0; k < p.value.size(); ++k) {
      const double g = p.grad[k];
      m[k] = static_cast<T>(hp.beta1 * m[k] + (1.0 - hp.beta1) * g);
      v[k] = static_cast<T>(hp.beta2 * v[k] + (1.0 - hp.beta2) * g * g);
      const double mhat = m[k] / c1;
      const double vhat = v[k] / c2;
      p.value[k] = static_cast<T>(p.value[k] - hp.lr * mhat / (std::sqrt(vhat) + hp.eps));
    }
  }
}

template void adam_step<float>(ParameterSet<float>&, AdamState<float>&, const AdamParams&);
template void adam_step<double>(ParameterSet<double>&, AdamState<double>&, const AdamParams&);

}  // namespace gaitid::autodiff
