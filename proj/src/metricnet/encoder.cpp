#include "gaitid/metricnet/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "gaitid/core/random.hpp"

namespace gaitid::metricnet {

void EncoderConfig::validate() const {
  require(in_channels >= 1, "net.encoder.in_channels", "must be positive");
  require(stage_channels.size() == 4, "net.encoder.stage_channels", "exactly 4 stages are required");
  for (int c : stage_channels) {
    require(c >= 8 && c % 8 == 0, "net.encoder.stage_channels",
            "each stage width must be a positive multiple of 8 to split into C/4, C/2, C/8, C/8, got " +
                std::to_string(c));
  }
  require(embedding_dim >= 1, "net.encoder.embedding_dim", "must be positive");
  require(input_h >= 16 && input_w >= 16 && input_h % 16 == 0 && input_w % 16 == 0, "slicer.out_size",
          "must be divisible by 16");
}

double he_uniform_bound(int fan_in) { return std::sqrt(6.0 / fan_in); }

template <typename T>
typename Encoder<T>::Conv Encoder<T>::add_conv(const std::string& name, int c_in, int c_out, int k, Rng& rng) {
  Tensor<T> w({c_out, c_in, k, k});
  const double bound = he_uniform_bound(c_in * k * k);
  for (auto& v : w.data) v = static_cast<T>(rng.uniform(-bound, bound));
  Conv c{params_.size(), params_.size() + 1, k / 2};
  params_.add(name + ".w", std::move(w));
  params_.add(name + ".b", Tensor<T>({c_out}));
  return c;
}

template <typename T>
Encoder<T>::Encoder(const EncoderConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(split_seed(seed, 0x454E43));
  int c_in = cfg_.in_channels;
  for (std::size_t s = 0; s < cfg_.stage_channels.size(); ++s) {
    const int c = cfg_.stage_channels[s];
    const std::string p = "stage" + std::to_string(s + 1);
    Stage st;
    st.b1 = add_conv(p + ".b1", c_in, c / 4, 1, rng);
    st.r3 = add_conv(p + ".b3_reduce", c_in, c / 4, 1, rng);
    st.c3 = add_conv(p + ".b3", c / 4, c / 2, 3, rng);
    st.r5 = add_conv(p + ".b5_reduce", c_in, c / 8, 1, rng);
    st.c5 = add_conv(p + ".b5", c / 8, c / 8, 5, rng);
    st.bp = add_conv(p + ".pool_proj", c_in, c / 8, 1, rng);
    st.skip = add_conv(p + ".skip", c_in, c, 1, rng);
    stages_.push_back(st);
    c_in = c;
  }
  const int flat = c_in * (cfg_.input_h / 16) * (cfg_.input_w / 16);
  Tensor<T> w({cfg_.embedding_dim, flat});
  const double bound = he_uniform_bound(flat);
  for (auto& v : w.data) v = static_cast<T>(rng.uniform(-bound, bound));
  fc_w_ = params_.size();
  params_.add("fc.w", std::move(w));
  fc_b_ = params_.size();
  params_.add("fc.b", Tensor<T>({cfg_.embedding_dim}));
}

template <typename T>
Var Encoder<T>::apply(Tape<T>& tape, const Conv& c, Var x) {
  return autodiff::conv2d(tape, x, tape.param(params_[c.w]), tape.param(params_[c.b]), 1, c.pad);
}

template <typename T>
Var Encoder<T>::forward(Tape<T>& tape, const Tensor<T>& x) {
  return forward(tape, tape.leaf(x));
}

template <typename T>
Var Encoder<T>::forward(Tape<T>& tape, Var x) {
  const auto& d = tape.value(x).dims;
  require(d.size() == 4 && d[1] == cfg_.in_channels && d[2] == cfg_.input_h && d[3] == cfg_.input_w, "input",
          "encoder expects (n, " + std::to_string(cfg_.in_channels) + ", " + std::to_string(cfg_.input_h) + ", " +
              std::to_string(cfg_.input_w) + "), got " + autodiff::shape_string(d));
  using namespace autodiff;
  Var h = x;
  for (const Stage& s : stages_) {
    const Var b1 = relu(tape, apply(tape, s.b1, h));
    const Var b3 = relu(tape, apply(tape, s.c3, relu(tape, apply(tape, s.r3, h))));
    const Var b5 = relu(tape, apply(tape, s.c5, relu(tape, apply(tape, s.r5, h))));
    const Var bp = relu(tape, apply(tape, s.bp, avgpool3_s1(tape, h)));
    const Var inc = concat_channels(tape, {b1, b3, b5, bp});
    h = maxpool2(tape, relu(tape, add(tape, inc, apply(tape, s.skip, h))));
  }
  return fc(tape, flatten(tape, h), tape.param(params_[fc_w_]), tape.param(params_[fc_b_]));
}

template <typename T>
Tensor<T> Encoder<T>::embed(const Tensor<T>& x, Exec exec, int chunk) {
  require(x.rank() == 4, "input", "embed expects a 4-D batch");
  const int n = x.dim(0);
  const std::size_t per = x.size() / static_cast<std::size_t>(n);
  Tensor<T> out({n, cfg_.embedding_dim});
  Tape<T> tape(exec);
  for (int s = 0; s < n; s += chunk) {
    const int m = std::min(chunk, n - s);
    Tensor<T> part({m, x.dim(1), x.dim(2), x.dim(3)});
    std::copy_n(x.data.begin() + static_cast<std::ptrdiff_t>(s * per), m * per, part.data.begin());
    tape.clear();
    const Var z = forward(tape, part);
    std::copy(tape.value(z).data.begin(), tape.value(z).data.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(s) * cfg_.embedding_dim);
  }
  return out;
}

template class Encoder<float>;
template class Encoder<double>;

}  // namespace gaitid::metricnet
