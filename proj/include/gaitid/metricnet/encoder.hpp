#pragma once

#include <cstdint>
#include <vector>

#include "gaitid/autodiff/ops.hpp"
#include "gaitid/autodiff/tape.hpp"
#include "gaitid/core/random.hpp"

namespace gaitid::metricnet {

using autodiff::ParameterSet;
using autodiff::Tape;
using autodiff::Tensor;
using autodiff::Var;

struct EncoderConfig {
  int in_channels = 2;
  std::vector<int> stage_channels = {8, 16, 32, 64};
  int embedding_dim = 64;
  int input_h = 64;
  int input_w = 64;

  void validate() const;
  bool operator==(const EncoderConfig&) const = default;
};

// Inception-residual stages: per stage
//   y = maxpool2(relu(concat[b1, b3, b5, bp] + skip(x)))
// with b1 = relu(1x1), b3 = relu(3x3(relu(1x1))), b5 = relu(5x5(relu(1x1))),
// bp = relu(1x1(avgpool3(x))) and widths C/4, C/2, C/8, C/8; skip is a 1x1
// projection. A fully connected layer maps the flattened features to the
// embedding.
template <typename T>
class Encoder {
 public:
  Encoder(const EncoderConfig& cfg, std::uint64_t seed);

  const EncoderConfig& config() const { return cfg_; }
  ParameterSet<T>& params() { return params_; }
  const ParameterSet<T>& params() const { return params_; }

  // x: (n, in_channels, input_h, input_w) -> (n, embedding_dim)
  Var forward(Tape<T>& tape, const Tensor<T>& x);
  Var forward(Tape<T>& tape, Var x);
  // Inference in chunks of `chunk` samples without keeping a tape around.
  Tensor<T> embed(const Tensor<T>& x, Exec exec = Exec::parallel, int chunk = 64);

 private:
  struct Conv {
    std::size_t w, b;
    int pad;
  };
  struct Stage {
    Conv b1, r3, c3, r5, c5, bp, skip;
  };
  Conv add_conv(const std::string& name, int c_in, int c_out, int k, Rng& rng);
  Var apply(Tape<T>& tape, const Conv& c, Var x);

  EncoderConfig cfg_;
  ParameterSet<T> params_;
  std::vector<Stage> stages_;
  std::size_t fc_w_ = 0, fc_b_ = 0;
};

// He-uniform bound sqrt(6 / fan_in).
double he_uniform_bound(int fan_in);

}  // namespace gaitid::metricnet
