// Acceptance suite: one PASS/FAIL line per criterion, progress on lines
// starting with '#'. Exit status is 0 once every selected criterion has been
// evaluated; --strict also turns any FAIL into a non-zero status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "gaitid/autodiff/ops.hpp"
#include "gaitid/cli/config.hpp"
#include "gaitid/cli/pipeline.hpp"
#include "gaitid/evalbench/experiments.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/gaitsim/kinematics.hpp"
#include "gaitid/gaitsim/subject.hpp"
#include "gaitid/io/rten.hpp"
#include "gaitid/metricnet/encoder.hpp"
#include "gaitid/metricnet/triplet.hpp"
#include "gaitid/radardsp/beamform.hpp"
#include "gaitid/radardsp/micro_doppler.hpp"
#include "gaitid/radardsp/micro_omega.hpp"
#include "gaitid/radardsp/range.hpp"
#include "gaitid/slicer/slicer.hpp"

using namespace gaitid;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// Pinned tolerances.
constexpr int kRangeBinTol = 1;
constexpr double kAngleTolDeg = 3.19;
constexpr double kAngleResDeg = 3.19, kAngleResTolDeg = 0.01;
constexpr double kVelResCm = 4.753, kVelResTolCm = 0.005;
constexpr double kNotch = 0.02, kVmax = 6.0;
constexpr double kOmegaTarget = 0.10;
constexpr double kMirrorRelTol = 1e-6;  // samples are float32, so mirroring is exact only to rounding
constexpr double kHalfCycle = 0.5, kSpacingRelTol = 0.10;
constexpr int kCountTol = 1;
constexpr int kShifts = 50;
constexpr double kGradRelTol = 1e-5;
constexpr double kGradRuntime = 60.0;
constexpr int kTripletSets = 1000;
constexpr double kTripletLossTol = 1e-6;
constexpr double kIdErrorMax = 0.15;
constexpr double kIdRuntimeMax = 30 * 60.0;
constexpr double kTrendNoise = 0.02;
constexpr int kRtenTensors = 1000;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string num(double v, int digits = 4) {
  char b[64];
  std::snprintf(b, sizeof b, "%.*f", digits, v);
  return b;
}

struct Verdicts {
  int pass = 0;
  int fail = 0;
  void add(int id, bool ok, const std::string& detail) {
    (ok ? pass : fail)++;
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
  }
};

void note(const std::string& s) {
  std::printf("# %s\n", s.c_str());
  std::fflush(stdout);
}

gaitsim::RadarConfig noiseless() {
  gaitsim::RadarConfig c;
  c.noise_snr_db = std::numeric_limits<double>::infinity();
  return c;
}

std::shared_ptr<gaitsim::PointTarget> point(double range, double v, double angle, double rate, double length) {
  auto p = std::make_shared<gaitsim::PointTarget>();
  p->range0 = range;
  p->radial_velocity = v;
  p->angle0 = angle;
  p->angular_rate = rate;
  p->length_s = length;
  return p;
}

template <class P>
std::size_t argmax_column(const P& p, std::size_t col) {
  std::size_t best = 0;
  for (std::size_t f = 0; f < p.n_freq; ++f) {
    if (p.at(f, col) > p.at(best, col)) best = f;
  }
  return best;
}

// ---------------------------------------------------------------- 1 to 4

void physics(Verdicts& v) {
  const auto t = Clock::now();
  const gaitsim::RadarConfig cfg;  // default noise level
  const double theta = 10 * kDeg;
  gaitsim::SyntheticSource src(point(3.0, 1.2, theta, 0.0, 0.3), cfg, 7);

  const auto cube = gaitsim::simulate_capture(*point(3.0, 1.2, theta, 0.0, 0.002), cfg, 7);
  const auto prof = radardsp::range_profiles(cube);
  int best_bin = 0;
  double best = -1;
  for (int b = 0; b < prof.n_bins; ++b) {
    double p = 0;
    for (int ch = 0; ch < prof.n_channels; ++ch) p += std::norm(prof.at(0, ch, b));
    if (p > best) {
      best = p;
      best_bin = b;
    }
  }
  const bool range_ok = std::abs(best_bin - 5) <= kRangeBinTol;

  const auto pw = radardsp::doppler_power(src, {});
  double worst_v = 0;
  for (std::size_t c = 0; c < pw.n_time; ++c) worst_v = std::max(worst_v, std::abs(pw.freq_axis[argmax_column(pw, c)] - 1.2));
  const bool doppler_ok = worst_v <= cfg.velocity_resolution();

  const std::size_t per_chirp = static_cast<std::size_t>(prof.n_channels) * prof.n_bins;
  const auto map = radardsp::beamform({prof.values.data(), per_chirp}, prof.n_bins, cfg);
  int best_a = 0;
  for (int a = 0; a < map.n_angle; ++a) {
    if (std::abs(map.at(best_bin, a)) > std::abs(map.at(best_bin, best_a))) best_a = a;
  }
  const double angle_err = std::abs(map.angle_axis[static_cast<std::size_t>(best_a)] - theta) / kDeg;
  const bool angle_ok = angle_err <= kAngleTolDeg;
  const double secs = since(t);
  v.add(1, range_ok && doppler_ok && angle_ok && secs < 10.0,
        "range bin " + std::to_string(best_bin) + " (want 5 +- 1); worst micro-Doppler peak offset " +
            num(worst_v) + " m/s (<= " + num(cfg.velocity_resolution()) + "); AoA error " + num(angle_err, 2) +
            " deg (<= 3.19); " + num(secs, 1) + " s (< 10)");
}

void resolutions(Verdicts& v) {
  const gaitsim::RadarConfig cfg;
  const double th = cfg.angle_resolution() / kDeg;
  const double vr = cfg.velocity_resolution() * 100;
  v.add(2, std::abs(th - kAngleResDeg) <= kAngleResTolDeg && std::abs(vr - kVelResCm) <= kVelResTolCm,
        "theta_res " + num(th, 4) + " deg, v_res " + num(vr, 4) + " cm/s");
}

void filtering(Verdicts& v) {
  bool ok = true;
  std::size_t zeroed = 0;
  double reach = 0;
  for (int s = 0; s < 3; ++s) {
    gaitsim::SubjectParams p;
    p.subject_id = s;
    p.walking_speed = 1.0 + 0.2 * s;
    const auto model = gaitsim::build_subject(p, 30 + s);
    gaitsim::WalkScenario w;
    w.duration = 3.0;
    w.direction = s % 2 ? gaitsim::Direction::away : gaitsim::Direction::toward;
    gaitsim::SyntheticSource src(std::make_shared<gaitsim::WalkingSubject>(model, w), gaitsim::RadarConfig{}, 40 + s);
    const auto md = radardsp::micro_doppler(src, {});
    for (std::size_t f = 0; f < md.n_freq; ++f) {
      reach = std::max(reach, std::abs(md.freq_axis[f]));
      if (std::abs(md.freq_axis[f]) > kNotch) continue;
      for (std::size_t c = 0; c < md.n_time; ++c) {
        ok = ok && md.at(f, c) == 0.0f;
        ++zeroed;
      }
    }
  }
  ok = ok && reach <= kVmax && zeroed > 0;
  v.add(3, ok, std::to_string(zeroed) + " cells with |v| <= 0.02 m/s all zero: " + (ok ? "yes" : "no") +
                   "; largest |v| on the axis " + num(reach) + " m/s (<= 6.0)");
}

void omega(Verdicts& v) {
  const auto cfg = noiseless();
  const radardsp::OmegaParams op;
  auto run = [&](double rate) {
    gaitsim::SyntheticSource s(point(3.0, 0.0, -rate * 0.5, rate, 1.0), cfg, 1);
    return radardsp::omega_power(s, {}, op);
  };
  const auto pos = run(kOmegaTarget), neg = run(-kOmegaTarget);
  double worst = 0, peak = 0, asym = 0;
  bool mirrored_peaks = true;
  for (double x : pos.values) peak = std::max(peak, x);
  for (std::size_t c = 0; c < pos.n_time; ++c) {
    const auto bp = argmax_column(pos, c), bn = argmax_column(neg, c);
    worst = std::max({worst, std::abs(pos.freq_axis[bp] - kOmegaTarget), std::abs(neg.freq_axis[bn] + kOmegaTarget)});
    mirrored_peaks = mirrored_peaks && bp == pos.n_freq - 1 - bn;
    for (std::size_t f = 0; f < pos.n_freq; ++f) {
      asym = std::max(asym, std::abs(pos.at(f, c) - neg.at(pos.n_freq - 1 - f, c)));
    }
  }
  const bool ok = worst <= op.omega_step() && mirrored_peaks && asym <= kMirrorRelTol * peak;
  v.add(4, ok, "worst peak offset " + num(worst) + " rad/s (<= " + num(op.omega_step()) + "); peak bins mirrored: " +
                   (mirrored_peaks ? "yes" : "no") + "; max mirror mismatch " + num(asym / peak, 10) +
                   " of peak (float32 samples; <= 1e-6)");
}

// ---------------------------------------------------------------- 5

radardsp::MicroMotionSpectrogram prepend_zero_columns(const radardsp::MicroMotionSpectrogram& s, std::size_t k) {
  auto out = s;
  out.n_time = s.n_time + k;
  out.values.assign(out.n_freq * out.n_time, 0.0f);
  for (std::size_t f = 0; f < s.n_freq; ++f) {
    for (std::size_t c = 0; c < s.n_time; ++c) out.at(f, c + k) = s.at(f, c);
  }
  return out;
}

void slicing(Verdicts& v) {
  double worst_spacing = 0;
  int worst_count = 0;
  int captures = 0;
  std::vector<radardsp::MicroMotionSpectrogram> uds;
  for (int s = 0; s < 4; ++s) {
    gaitsim::SubjectParams p;
    p.subject_id = s;
    p.gait_frequency = 1.0;
    p.walking_speed = 1.1 + 0.1 * s;
    const auto model = gaitsim::build_subject(p, 50 + s);
    for (auto dir : {gaitsim::Direction::toward, gaitsim::Direction::away}) {
      gaitsim::WalkScenario w;
      w.direction = dir;
      w.duration = 5.0 / p.walking_speed;
      w.aspect_angle = (s - 1.5) * 10 * kDeg;
      gaitsim::SyntheticSource src(std::make_shared<gaitsim::WalkingSubject>(model, w), gaitsim::RadarConfig{},
                                   60 + s * 2 + (dir == gaitsim::Direction::away));
      const auto pair = radardsp::synchronize(radardsp::micro_doppler(src, {}), radardsp::micro_omega(src, {}, {}));
      const auto r = slicer::slice_capture(pair, s, "c");
      for (std::size_t i = 1; i < r.boundaries.size(); ++i) {
        const double gap = (r.boundaries[i] - r.boundaries[i - 1]) * pair.ud.hop_s;
        worst_spacing = std::max(worst_spacing, std::abs(gap - kHalfCycle) / kHalfCycle);
      }
      if (r.boundaries.size() < 2) worst_spacing = 1.0;
      const double span = pair.ud.n_time * pair.ud.hop_s;
      const double expected = 2.0 * span * p.gait_frequency - 1.0;
      worst_count = std::max(worst_count, static_cast<int>(std::lround(std::abs(r.slices.size() - expected))));
      note("capture " + std::to_string(captures) + ": " + std::to_string(r.slices.size()) + " slices, expected " +
           num(expected, 2));
      ++captures;
      uds.push_back(pair.ud);
    }
  }

  std::mt19937_64 g(5);
  int shifted_ok = 0;
  for (int trial = 0; trial < kShifts; ++trial) {
    const auto& ud = uds[static_cast<std::size_t>(trial) % uds.size()];
    const auto base = slicer::detect_boundary_columns(slicer::envelopes_and_cog(ud, slicer::binarize_and_close(ud)));
    const std::size_t k = 1 + g() % 400;
    const auto sh = prepend_zero_columns(ud, k);
    const auto moved = slicer::detect_boundary_columns(slicer::envelopes_and_cog(sh, slicer::binarize_and_close(sh)));
    bool same = moved.size() == base.size() && !base.empty();
    for (std::size_t i = 0; same && i < base.size(); ++i) same = moved[i] == base[i] + k;
    shifted_ok += same;
  }
  const bool ok = worst_spacing <= kSpacingRelTol && worst_count <= kCountTol && shifted_ok == kShifts;
  v.add(5, ok, std::to_string(captures) + " captures at 1.0 Hz: worst spacing deviation " + num(100 * worst_spacing, 1) +
                   " % (<= 10), worst count deviation " + std::to_string(worst_count) + " (<= 1); shift-equivariant " +
                   std::to_string(shifted_ok) + "/" + std::to_string(kShifts));
}

// ---------------------------------------------------------------- 6

using autodiff::Tape;
using autodiff::Tensor;
using autodiff::Var;
using TD = Tensor<double>;

TD random_tensor(std::vector<int> dims, std::uint64_t seed, double lo = -1, double hi = 1) {
  TD t(std::move(dims));
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& x : t.data) x = u(g);
  return t;
}

struct GradStats {
  double worst = 0;
  int checked = 0;
  int kinks = 0;
};

// Central differences on sampled entries; entries whose stencil straddles a
// ReLU or max-pool switch (one-sided slopes disagree) are resampled.
void fd_check(const std::function<double()>& loss, std::vector<double*> entries, const std::vector<double>& analytic,
              double gscale, GradStats& st) {
  const double base = loss();
  const double h = 1e-5;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    double& x = *entries[i];
    const double x0 = x;
    x = x0 + h;
    const double up = loss();
    x = x0 - h;
    const double down = loss();
    x = x0;
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-3 * gscale});
    if (std::abs((up - base) - (base - down)) / h > 1e-4 * scale) {
      ++st.kinks;
      continue;
    }
    st.worst = std::max(st.worst, std::abs(analytic[i] - numeric) / scale);
    ++st.checked;
  }
}

using Graph = std::function<Var(Tape<double>&, const std::vector<Var>&)>;

void check_graph(const Graph& g, std::vector<TD> inputs, GradStats& st) {
  std::mt19937_64 rng(11);
  auto scalar = [&](Tape<double>& t, Var y) {
    if (t.value(y).size() == 1) return y;
    Var flat = autodiff::flatten(t, y);
    const int n = t.value(flat).dim(1);
    return autodiff::sum(t, autodiff::fc(t, flat, t.leaf(random_tensor({1, n}, 99)), t.leaf(TD({1}))));
  };
  auto loss = [&] {
    Tape<double> t;
    std::vector<Var> vs;
    for (auto& x : inputs) vs.push_back(t.leaf(x, true));
    return t.value(scalar(t, g(t, vs)))[0];
  };
  Tape<double> t;
  std::vector<Var> vs;
  for (auto& x : inputs) vs.push_back(t.leaf(x, true));
  t.backward(scalar(t, g(t, vs)));
  double gmax = 0;
  std::vector<double*> entries;
  std::vector<double> analytic;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (double gv : t.grad(vs[i]).data) gmax = std::max(gmax, std::abs(gv));
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      entries.push_back(&inputs[i].data[k]);
      analytic.push_back(t.grad(vs[i])[k]);
    }
  }
  fd_check(loss, entries, analytic, gmax, st);
}

TD off_kink(TD t) {
  for (auto& x : t.data) x = x >= 0 ? x + 0.1 : x - 0.1;
  return t;
}

void gradients(Verdicts& v) {
  const auto t0 = Clock::now();
  GradStats ops;
  using namespace autodiff;
  for (auto [stride, pad] : {std::pair{1, 0}, {1, 1}, {2, 1}}) {
    check_graph([=](Tape<double>& t, const std::vector<Var>& x) { return conv2d(t, x[0], x[1], x[2], stride, pad); },
                {random_tensor({2, 3, 6, 5}, 1), random_tensor({4, 3, 3, 3}, 2), random_tensor({4}, 3)}, ops);
  }
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return relu(t, x[0]); },
              {off_kink(random_tensor({2, 2, 3, 3}, 4))}, ops);
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return maxpool2(t, x[0]); },
              {random_tensor({2, 2, 5, 6}, 5)}, ops);
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return avgpool3_s1(t, x[0]); },
              {random_tensor({1, 2, 4, 5}, 6)}, ops);
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return concat_channels(t, {add(t, x[0], x[1]), x[2]}); },
              {random_tensor({2, 1, 3, 3}, 7), random_tensor({2, 1, 3, 3}, 8), random_tensor({2, 2, 3, 3}, 9)}, ops);
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return fc(t, flatten(t, x[0]), x[1], x[2]); },
              {random_tensor({3, 2, 2, 2}, 10), random_tensor({5, 8}, 11), random_tensor({5}, 12)}, ops);
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return half_sq_norm(t, x[0]); },
              {random_tensor({2, 3}, 13)}, ops);
  check_graph([](Tape<double>& t, const std::vector<Var>& x) { return sum(t, x[0]); }, {random_tensor({2, 3}, 14)},
              ops);
  check_graph(
      [](Tape<double>& t, const std::vector<Var>& x) {
        return metricnet::batch_hard_loss(t, x[0], {0, 0, 1, 1, 2, 2}, 1.0);
      },
      {random_tensor({6, 3}, 15)}, ops);

  // Full default encoder with the batch-hard loss, three sampled entries per
  // parameter tensor.
  GradStats enc_st;
  metricnet::EncoderConfig ec;
  metricnet::Encoder<double> enc(ec, 3);
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    auto& p = enc.params()[i];
    if (p.value.rank() == 1) p.value = random_tensor(p.value.dims, 100 + i, -0.05, 0.05);
  }
  const TD x = random_tensor({4, 2, 64, 64}, 4, 0.0, 1.0);
  const std::vector<int> labels = {0, 0, 1, 1};
  double margin = 0;
  {
    Tape<double> t;
    const auto& z = t.value(enc.forward(t, x));
    const auto bh = metricnet::batch_hard(metricnet::pairwise_distances(z.data, 4, z.dim(1)), labels, 1.0);
    for (int i = 0; i < 4; ++i) margin = std::max(margin, bh.hn[i] - bh.hp[i]);
    margin += 0.5;
  }
  auto loss = [&] {
    Tape<double> t;
    return t.value(metricnet::batch_hard_loss(t, enc.forward(t, x), labels, margin))[0];
  };
  enc.params().zero_grad();
  {
    Tape<double> t;
    t.backward(metricnet::batch_hard_loss(t, enc.forward(t, x), labels, margin));
  }
  double gmax = 0;
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    for (double g : enc.params()[i].grad.data) gmax = std::max(gmax, std::abs(g));
  }
  std::mt19937_64 g(9);
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    auto& p = enc.params()[i];
    for (int tries = 0, got = 0; tries < 12 && got < 3; ++tries) {
      const int before = enc_st.checked;
      const std::size_t k = g() % p.value.size();
      fd_check(loss, {&p.value.data[k]}, {p.grad[k]}, gmax, enc_st);
      got += enc_st.checked - before;
    }
  }
  const double secs = since(t0);
  const double worst = std::max(ops.worst, enc_st.worst);
  const bool ok = worst < kGradRelTol && secs < kGradRuntime && ops.checked > 0 &&
                  enc_st.checked >= static_cast<int>(2 * enc.params().size());
  v.add(6, ok, "max relative error " + num(worst, 9) + " over " + std::to_string(ops.checked) + " op entries and " +
                   std::to_string(enc_st.checked) + " encoder entries (" + std::to_string(ops.kinks + enc_st.kinks) +
                   " kink-adjacent entries resampled); " + num(secs, 1) + " s (< 60)");
}

// ---------------------------------------------------------------- 7

void triplets(Verdicts& v) {
  std::mt19937_64 g(77);
  std::normal_distribution<double> nd;
  int agree = 0, sets = 0;
  double worst = 0;
  while (sets < kTripletSets) {
    const int n = 4 + static_cast<int>(g() % 5);  // 4..8
    const int classes = 2 + static_cast<int>(g() % (n / 2 - 1));
    std::vector<int> labels;
    for (int c = 0; c < classes; ++c) labels.insert(labels.end(), {c, c});
    while (static_cast<int>(labels.size()) < n) labels.push_back(static_cast<int>(g() % classes));
    std::shuffle(labels.begin(), labels.end(), g);
    const int d = 1 + static_cast<int>(g() % 4);
    const double margin = 0.05 + (g() % 200) / 100.0;
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    for (auto& x : z) x = nd(g);
    const auto dist = metricnet::pairwise_distances(z, n, d);
    const auto r = metricnet::batch_hard(dist, labels, margin);
    double loss = 0;
    bool same = true;
    for (int a = 0; a < n; ++a) {
      double best = -1e300;
      int bp = -1, bn = -1;
      for (int p = 0; p < n; ++p) {
        if (p == a || labels[p] != labels[a]) continue;
        for (int q = 0; q < n; ++q) {
          if (labels[q] == labels[a]) continue;
          const double val = dist[a * n + p] - dist[a * n + q];
          if (val > best) {
            best = val;
            bp = p;
            bn = q;
          }
        }
      }
      loss += std::max(best + margin, 0.0);
      same = same && r.hp_index[a] == bp && r.hn_index[a] == bn;
    }
    loss /= n;
    worst = std::max(worst, std::abs(loss - r.loss));
    agree += same && std::abs(loss - r.loss) <= kTripletLossTol;
    ++sets;
  }
  const std::vector<double> zero(16, 0.0);
  const double ident = metricnet::batch_hard(zero, {0, 0, 1, 1}, 0.5).loss;
  Tape<double> t;
  const double ident_tape = t.value(metricnet::batch_hard_loss(t, t.leaf(TD({4, 3}, 2.5)), {0, 0, 1, 1}, 0.5))[0];
  const bool ok = agree == kTripletSets && ident == 0.5 && ident_tape == 0.5;
  v.add(7, ok, std::to_string(agree) + "/" + std::to_string(kTripletSets) +
                   " random batches (n <= 8) match exhaustive enumeration, worst loss gap " + num(worst, 12) +
                   "; identical embeddings give " + num(ident_tape, 6) + " (delta 0.5)");
}

// ---------------------------------------------------------------- 8, 9

struct Built {
  metricnet::SliceSet set;
  double seconds = 0;
};

Built build_dataset(const fs::path& dir, int subjects, double minutes) {
  cli::PipelineConfig cfg;
  cfg.cohort.n_subjects = subjects;
  cfg.cohort.minutes = minutes;
  const auto t = Clock::now();
  cli::cmd_dataset_build(cfg, dir, [](const std::string& s) { note("  " + s); });
  Built b{cli::read_slices(dir), since(t)};
  note(std::to_string(subjects) + " subjects x " + num(minutes, 2) + " min: " + std::to_string(b.set.size()) +
       " slices in " + num(b.seconds, 0) + " s");
  return b;
}

evalbench::EvalConfig eval_config(std::vector<double>* stamps) {
  evalbench::EvalConfig ec;
  ec.seeds = {1, 2, 3};
  ec.progress = [stamps, t0 = Clock::now()](const std::string& s) {
    if (stamps) stamps->push_back(since(t0));
    note("  " + s);
  };
  return ec;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  int n = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      s += x;
      ++n;
    }
  }
  return n ? s / n : std::numeric_limits<double>::quiet_NaN();
}

struct Trend {
  bool ran = false;
  bool a = false, b = false, c = false;
  std::string da, db, dc;
};

void identification(Verdicts& v, const fs::path& work, Trend& trend) {
  const auto data = build_dataset(work / "cohort_5x2", 5, 2.0);
  std::vector<double> stamps;
  const auto rep = evalbench::run_constellation(data.set, eval_config(&stamps));
  evalbench::write_report(work / "reports", rep);
  // Progress fires after each run; seed-major order ud, uw, concat.
  double concat_secs = 0;
  for (std::size_t i = 2; i < stamps.size(); i += 3) concat_secs += stamps[i] - stamps[i - 1];
  const auto& concat = rep.rows[2];
  const double runtime = data.seconds + concat_secs;
  std::string per_seed;
  for (double e : concat.errors) per_seed += (per_seed.empty() ? "" : ", ") + num(100 * e, 1);
  v.add(8, concat.mean <= kIdErrorMax && runtime <= kIdRuntimeMax,
        "concat held-out error " + num(100 * concat.mean, 2) + " % (seeds " + per_seed + "; <= 15); dataset + 3 concat runs " +
            num(runtime / 60, 1) + " min on " + std::to_string(std::max(1L, sysconf(_SC_NPROCESSORS_ONLN))) +
            " core(s) (<= 30)");
  const double delta = metricnet::TripletConfig{}.margin;
  note("concat held-out batch-hard loss after " + std::to_string(metricnet::TrainConfig{}.epochs) +
       " epochs: " + num(mean(concat.held_out_loss), 4) + " (delta/2 = " + num(delta / 2, 2) + ")");

  trend.ran = true;
  trend.a = concat.mean <= rep.rows[0].mean;
  trend.da = "concat " + num(100 * concat.mean, 2) + " % vs micro-Doppler " + num(100 * rep.rows[0].mean, 2) +
             " % (micro-omega " + num(100 * rep.rows[1].mean, 2) + " %)";
}

void trends(Verdicts& v, const fs::path& work, Trend& trend) {
  if (!trend.ran) {
    const auto data = build_dataset(work / "cohort_5x2", 5, 2.0);
    const auto rep = evalbench::run_constellation(data.set, eval_config(nullptr));
    evalbench::write_report(work / "reports", rep);
    trend.a = rep.rows[2].mean <= rep.rows[0].mean;
    trend.da = "concat " + num(100 * rep.rows[2].mean, 2) + " % vs micro-Doppler " + num(100 * rep.rows[0].mean, 2) + " %";
  }
  note("9a: " + trend.da);

  const auto many = build_dataset(work / "cohort_15x1", 15, 1.0);
  const auto cx = evalbench::run_complexity(many.set, {5, 10, 15}, eval_config(nullptr));
  evalbench::write_report(work / "reports", cx);
  trend.b = true;
  for (std::size_t i = 1; i < cx.rows.size(); ++i) trend.b = trend.b && cx.rows[i].mean >= cx.rows[i - 1].mean - kTrendNoise;
  trend.db = "5/10/15 classes: " + num(100 * cx.rows[0].mean, 2) + " / " + num(100 * cx.rows[1].mean, 2) + " / " +
             num(100 * cx.rows[2].mean, 2) + " % (non-decreasing within 2 points)";
  note("9b: " + trend.db);

  const auto longer = build_dataset(work / "cohort_5x3", 5, 3.0);
  const auto sz = evalbench::run_size(longer.set, {1.05, 2.10}, eval_config(nullptr));
  evalbench::write_report(work / "reports", sz);
  trend.c = sz.rows[0].mean > sz.rows[1].mean;
  trend.dc = "1.05 min " + num(100 * sz.rows[0].mean, 2) + " % vs 2.10 min " + num(100 * sz.rows[1].mean, 2) + " %";
  note("9c: " + trend.dc);

  v.add(9, trend.a && trend.b && trend.c,
        std::string("(a) ") + (trend.a ? "yes" : "no") + ", (b) " + (trend.b ? "yes" : "no") + ", (c) " +
            (trend.c ? "yes" : "no") + "; " + trend.da + "; " + trend.db + "; " + trend.dc);
}

// ---------------------------------------------------------------- 10

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto bytes = io::read_file_bytes(e.path());
    out[fs::relative(e.path(), dir).string()] = std::string(bytes.begin(), bytes.end());
  }
  return out;
}

template <class T, class Bits>
bool rten_trip(std::mt19937_64& g, const fs::path& file) {
  const int rank = 1 + static_cast<int>(g() % 4);
  std::vector<std::uint64_t> dims;
  std::size_t n = 1;
  for (int r = 0; r < rank; ++r) {
    dims.push_back(1 + g() % 6);
    n *= dims.back();
  }
  std::vector<T> vals(n);
  for (auto& x : vals) {
    const Bits bits = static_cast<Bits>(g());
    std::memcpy(&x, &bits, sizeof x);  // any bit pattern, NaN payloads included
  }
  const auto bytes = io::encode_rten<T>(vals, dims);
  const auto back = io::decode_rten<T>(bytes);
  bool ok = back.dims == dims && std::memcmp(back.values.data(), vals.data(), n * sizeof(T)) == 0;
  if (!file.empty()) {
    io::write_rten<T>(file, vals, dims);
    const auto f = io::read_rten<T>(file);
    ok = ok && f.dims == dims && std::memcmp(f.values.data(), vals.data(), n * sizeof(T)) == 0;
  }
  return ok;
}

void persistence(Verdicts& v, const fs::path& work) {
  std::mt19937_64 g(2024);
  int exact = 0;
  fs::create_directories(work / "rten");
  for (int i = 0; i < kRtenTensors; ++i) {
    const fs::path file = i % 10 == 0 ? work / "rten" / (std::to_string(i) + ".rten") : fs::path{};
    exact += (g() & 1) ? rten_trip<float, std::uint32_t>(g, file) : rten_trip<double, std::uint64_t>(g, file);
  }

  cli::PipelineConfig cfg;
  cfg.cohort.n_subjects = 2;
  cfg.cohort.minutes = 0.3;
  bool same = true;
  std::size_t files = 0;
  for (const char* stage : {"dataset", "chain"}) {
    std::map<std::string, std::string> runs[2];
    for (int r = 0; r < 2; ++r) {
      const fs::path dir = work / "rerun" / (std::string(stage) + std::to_string(r));
      if (std::string(stage) == "dataset") {
        cli::cmd_dataset_build(cfg, dir);
      } else {
        cli::cmd_simulate(cfg, dir / "sim");
        cli::cmd_spectrogram(dir / "sim", dir / "spec");
        cli::cmd_slice(dir / "spec", dir / "data");
      }
      runs[r] = snapshot(dir);
    }
    same = same && runs[0] == runs[1] && !runs[0].empty();
    files += runs[0].size();
  }
  v.add(10, exact == kRtenTensors && same,
        std::to_string(exact) + "/" + std::to_string(kRtenTensors) + " RTEN tensors bit-exact; " +
            std::to_string(files) + " pipeline artifacts byte-identical on rerun: " + (same ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  bool strict = false, keep = false;
  std::string work_dir;
  app.add_option("--only", only, "criteria to run (repeatable); default all");
  app.add_flag("--strict", strict, "exit non-zero when any criterion fails");
  app.add_option("--work-dir", work_dir, "scratch directory for datasets and reports");
  app.add_flag("--keep", keep, "keep the scratch directory");
  CLI11_PARSE(app, argc, argv);

  const fs::path work =
      work_dir.empty() ? fs::temp_directory_path() / ("gaitid_acceptance_" + std::to_string(::getpid())) : fs::path(work_dir);
  fs::create_directories(work);
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  Verdicts v;
  Trend trend;
  const auto t0 = Clock::now();
  const std::pair<int, std::function<void()>> steps[] = {
      {1, [&] { physics(v); }},
      {2, [&] { resolutions(v); }},
      {3, [&] { filtering(v); }},
      {4, [&] { omega(v); }},
      {5, [&] { slicing(v); }},
      {6, [&] { gradients(v); }},
      {7, [&] { triplets(v); }},
      {10, [&] { persistence(v, work); }},
      {8, [&] { identification(v, work, trend); }},
      {9, [&] { trends(v, work, trend); }},
  };
  for (const auto& [id, run] : steps) {
    if (!want(id)) continue;
    try {
      run();
    } catch (const std::exception& e) {
      v.add(id, false, std::string("error: ") + e.what());
    }
  }
  note(std::to_string(v.pass) + " passed, " + std::to_string(v.fail) + " failed, " + num(since(t0) / 60, 1) +
       " min; reports in " + (keep ? (work / "reports").string() : std::string("(scratch removed)")));
  if (!keep) fs::remove_all(work);
  return strict && v.fail > 0 ? 1 : 0;
}
