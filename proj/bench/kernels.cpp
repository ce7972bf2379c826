// Serial reference against OpenMP paths for the hot kernels. Arg 0 = serial,
// 1 = parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "gaitid/autodiff/ops.hpp"
#include "gaitid/autodiff/reference.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/gaitsim/kinematics.hpp"
#include "gaitid/gaitsim/subject.hpp"
#include "gaitid/metricnet/encoder.hpp"
#include "gaitid/metricnet/triplet.hpp"
#include "gaitid/radardsp/micro_doppler.hpp"
#include "gaitid/radardsp/micro_omega.hpp"
#include "gaitid/radardsp/range.hpp"

using namespace gaitid;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

autodiff::Tensor<float> random_tensor(std::vector<int> dims, std::uint64_t seed) {
  autodiff::Tensor<float> t(std::move(dims));
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (auto& v : t.data) v = u(g);
  return t;
}

const gaitsim::SyntheticSource& walk() {
  static const auto source = [] {
    gaitsim::WalkScenario w;
    w.duration = 1.0;
    auto motion = std::make_shared<gaitsim::WalkingSubject>(gaitsim::build_subject({}, 1), w);
    return gaitsim::SyntheticSource(motion, gaitsim::RadarConfig{}, 1);
  }();
  return source;
}

void BM_conv2d_reference(benchmark::State& state) {
  const auto x = random_tensor({8, 16, 32, 32}, 1), w = random_tensor({32, 16, 3, 3}, 2), b = random_tensor({32}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(autodiff::reference::conv2d(x, w, b, 1, 1));
}
BENCHMARK(BM_conv2d_reference)->Unit(benchmark::kMillisecond);

void BM_conv2d(benchmark::State& state) {
  const auto x = random_tensor({8, 16, 32, 32}, 1), w = random_tensor({32, 16, 3, 3}, 2), b = random_tensor({32}, 3);
  for (auto _ : state) {
    autodiff::Tape<float> tape(mode(state));
    const auto y = autodiff::conv2d(tape, tape.leaf(x, true), tape.leaf(w, true), tape.leaf(b, true), 1, 1);
    tape.backward(autodiff::half_sq_norm(tape, y));
  }
}
BENCHMARK(BM_conv2d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_encoder_step(benchmark::State& state) {
  metricnet::Encoder<float> enc({}, 1);
  const auto x = random_tensor({40, 2, 64, 64}, 4);
  std::vector<int> labels;
  for (int c = 0; c < 5; ++c) labels.insert(labels.end(), 8, c);
  for (auto _ : state) {
    autodiff::Tape<float> tape(mode(state));
    tape.backward(metricnet::batch_hard_loss(tape, enc.forward(tape, x), labels, 0.5));
  }
}
BENCHMARK(BM_encoder_step)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_range_profiles(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(radardsp::range_profiles(walk(), radardsp::Taper::hann, -1, mode(state)));
  }
}
BENCHMARK(BM_range_profiles)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_doppler_power(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(radardsp::doppler_power(walk(), {}, mode(state)));
}
BENCHMARK(BM_doppler_power)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_omega_power(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(radardsp::omega_power(walk(), {}, {}, mode(state)));
}
BENCHMARK(BM_omega_power)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
