#include "gaitid/radardsp/micro_omega.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "gaitid/core/error.hpp"
#include "gaitid/radardsp/range.hpp"

namespace gaitid::radardsp {

void OmegaParams::validate() const {
  require(window_s > 0, "dsp.omega.window_s", "must be positive");
  require(omega_max > 0, "dsp.omega.omega_max", "must be positive");
  require(n_omega_bins >= 2 && n_omega_bins % 2 == 0, "dsp.omega.n_omega_bins", "must be even and at least 2");
  require(beam.padding >= 1, "dsp.omega.angle_padding", "must be at least 1");
  require(gate_threshold >= 0 && gate_threshold <= 1, "dsp.omega.gate_threshold", "must lie in [0, 1]");
  require(dynamic_range_db > 0, "dsp.omega.dynamic_range_db", "must be positive");
}

std::vector<double> aoa_profile(const gaitsim::ChirpSource& source, std::size_t chirp, const OmegaParams& p) {
  const auto& cfg = source.config();
  const int nv = cfg.n_virtual();
  const int ns = cfg.samples_per_chirp;
  const int n_range = ns / 2;

  thread_local std::vector<cfloat> raw;
  thread_local std::vector<cfloat> prof;
  raw.resize(static_cast<std::size_t>(nv) * ns);
  prof.resize(static_cast<std::size_t>(nv) * n_range);
  source.read_chirp(chirp, nv, raw);
  const auto window = taper_window(Taper::hann, static_cast<std::size_t>(ns));
  range_transform(raw, nv, ns, window, Fft(static_cast<std::size_t>(ns)), prof);

  const RangeAoAMap map = beamform(prof, n_range, cfg, p.beam);
  std::vector<double> gate(static_cast<std::size_t>(n_range), 0.0);
  for (int r = 0; r < n_range; ++r) {
    for (int a = 0; a < map.n_angle; ++a) gate[r] += std::norm(map.at(r, a));
  }
  const double strongest = *std::max_element(gate.begin(), gate.end());
  std::vector<double> out(static_cast<std::size_t>(map.n_angle), 0.0);
  if (strongest <= 0.0) return out;
  for (int r = 0; r < n_range; ++r) {
    if (gate[r] < p.gate_threshold * strongest) continue;
    for (int a = 0; a < map.n_angle; ++a) out[a] += std::norm(map.at(r, a));
  }
  return out;
}

namespace {

// Catmull-Rom taps; linear interpolation pulls tracks toward bin centres and
// biases the rate estimate by more than one grid step.
struct Tap {
  int index = -1;  // first of four samples, -1: off the angle axis
  std::array<double, 4> w{};
};

Tap cubic_tap(double pos, int n) {
  Tap t;
  const double fl = std::floor(pos);
  const double x = pos - fl;
  const double x2 = x * x;
  const double x3 = x2 * x;
  t.w = {0.5 * (-x3 + 2 * x2 - x), 0.5 * (3 * x3 - 5 * x2 + 2), 0.5 * (-3 * x3 + 4 * x2 + x), 0.5 * (x3 - x2)};
  t.index = static_cast<int>(fl) - 1;
  // Fold taps that fall off either end onto the edge sample.
  if (t.index < 0 || t.index + 3 > n - 1) {
    std::array<double, 4> w{};
    const int lo = std::clamp(t.index, 0, n - 4);
    for (int k = 0; k < 4; ++k) w[std::clamp(t.index + k, 0, n - 1) - lo] += t.w[k];
    t.w = w;
    t.index = lo;
  }
  return t;
}

}  // namespace

PowerSpectrogram omega_power(const gaitsim::ChirpSource& source, const StftParams& stft, const OmegaParams& p,
                             Exec exec) {
  stft.validate();
  p.validate();
  const auto& cfg = source.config();
  const double hop_s = stft.hop_chirps * cfg.chirp_s;
  const std::size_t n_hops = stft_column_count(source.n_chirps(), stft);
  const int m = static_cast<int>(std::lround(p.window_s / (2.0 * hop_s)));
  require(m >= 1, "dsp.omega.window_s", "window must cover at least two AoA profiles");
  const int span = 2 * m + 1;
  require(n_hops >= static_cast<std::size_t>(span), "capture", "too short for one angular-rate window");

  const int n_angle = p.beam.padding * cfg.n_virtual();
  std::vector<std::vector<double>> profiles(n_hops);
  const auto n_h = static_cast<std::int64_t>(n_hops);
  ParallelGuard guard;
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
  for (std::int64_t h = 0; h < n_h; ++h) {
    guard.run([&] {
      const std::size_t chirp = static_cast<std::size_t>(h) * stft.hop_chirps + stft.window_chirps / 2;
      profiles[static_cast<std::size_t>(h)] = aoa_profile(source, chirp, p);
    });
  }
  guard.rethrow();

  const int n_rows = p.n_omega_bins + 1;
  const auto axis = angle_axis(cfg, n_angle);
  // taps[(row * n_angle + theta0) * span + i]: where profile i of the window
  // is sampled for a track starting at theta0 with rate omega(row).
  std::vector<Tap> taps(static_cast<std::size_t>(n_rows) * n_angle * span);
  for (int r = 0; r < n_rows; ++r) {
    const double omega = -p.omega_max + r * p.omega_step();
    for (int b = 0; b < n_angle; ++b) {
      for (int i = 0; i < span; ++i) {
        const double theta = axis[b] + omega * (i - m) * hop_s;
        Tap& t = taps[(static_cast<std::size_t>(r) * n_angle + b) * span + i];
        if (std::abs(theta) > std::numbers::pi / 2) continue;
        const double pos = angle_to_bin(theta, cfg, n_angle);
        if (pos < 0.0 || pos > n_angle - 1) continue;
        t = cubic_tap(pos, n_angle);
      }
    }
  }

  PowerSpectrogram out;
  out.kind = SpectrogramKind::micro_omega;
  out.n_freq = static_cast<std::size_t>(n_rows);
  out.n_time = n_hops - 2 * m;
  out.values.assign(out.n_freq * out.n_time, 0.0);
  out.freq_axis.resize(out.n_freq);
  for (int r = 0; r < n_rows; ++r) out.freq_axis[r] = -p.omega_max + r * p.omega_step();
  out.t0 = stft_t0(stft, cfg.chirp_s) + m * hop_s;
  out.hop_s = hop_s;

  const auto n_cols = static_cast<std::int64_t>(out.n_time);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t c = 0; c < n_cols; ++c) {
    for (int r = 0; r < n_rows; ++r) {
      double best = 0.0;
      for (int b = 0; b < n_angle; ++b) {
        const Tap* t = taps.data() + (static_cast<std::size_t>(r) * n_angle + b) * span;
        double acc = 0.0;
        for (int i = 0; i < span; ++i) {
          if (t[i].index < 0) continue;
          const double* prof = profiles[static_cast<std::size_t>(c) + i].data() + t[i].index;
          acc += t[i].w[0] * prof[0] + t[i].w[1] * prof[1] + t[i].w[2] * prof[2] + t[i].w[3] * prof[3];
        }
        best = std::max(best, acc);
      }
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = best;
    }
    if (p.remove_floor) {
      double floor = out.at(0, static_cast<std::size_t>(c));
      for (int r = 1; r < n_rows; ++r) floor = std::min(floor, out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
      for (int r = 0; r < n_rows; ++r) out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) -= floor;
    }
  }
  return out;
}

MicroMotionSpectrogram micro_omega(const gaitsim::ChirpSource& source, const StftParams& stft, const OmegaParams& p,
                                   Exec exec) {
  return to_grayscale(omega_power(source, stft, p, exec), p.dynamic_range_db);
}

}  // namespace gaitid::radardsp
