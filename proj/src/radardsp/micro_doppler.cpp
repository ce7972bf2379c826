#include "gaitid/radardsp/micro_doppler.hpp"

#include <algorithm>
#include <cmath>

#include "gaitid/core/error.hpp"
#include "gaitid/radardsp/range.hpp"

namespace gaitid::radardsp {

void StftParams::validate() const {
  require(window_chirps >= 2, "dsp.window_chirps", "must be at least 2 chirps");
  require(hop_chirps >= 1, "dsp.hop_chirps", "must be positive");
  require(gate_threshold >= 0 && gate_threshold <= 1, "dsp.gate_threshold", "must lie in [0, 1]");
  require(notch_velocity >= 0, "dsp.notch_velocity", "must be non-negative");
  require(max_velocity > notch_velocity, "dsp.max_velocity", "must exceed the notch");
  require(dynamic_range_db > 0, "dsp.dynamic_range_db", "must be positive");
}

std::size_t stft_column_count(std::size_t n_chirps, const StftParams& p) {
  if (n_chirps < static_cast<std::size_t>(p.window_chirps)) return 0;
  return (n_chirps - p.window_chirps) / p.hop_chirps + 1;
}

double stft_t0(const StftParams& p, double chirp_s) { return 0.5 * p.window_chirps * chirp_s; }

PowerSpectrogram doppler_power(const gaitsim::ChirpSource& source, const StftParams& p, Exec exec) {
  p.validate();
  const auto& cfg = source.config();
  const std::size_t n_chirps = source.n_chirps();
  require(n_chirps >= static_cast<std::size_t>(p.window_chirps), "capture",
          "shorter than one STFT window (" + std::to_string(n_chirps) + " < " + std::to_string(p.window_chirps) +
              " chirps)");

  // Reference channel 0, stored gate-major so each window is contiguous.
  const RangeProfiles rp = range_profiles(source, p.range_taper, 1, exec);
  const int n_gates = rp.n_bins;
  std::vector<cfloat> slow(static_cast<std::size_t>(n_gates) * n_chirps);
  for (std::size_t k = 0; k < n_chirps; ++k) {
    for (int g = 0; g < n_gates; ++g) slow[g * n_chirps + k] = rp.values[k * n_gates + g];
  }

  const int w = p.window_chirps;
  const double v_res = cfg.wavelength() / (2.0 * w * cfg.chirp_s);
  const int k_max = static_cast<int>(std::floor(p.max_velocity / v_res + 1e-9));
  const std::size_t n_rows = static_cast<std::size_t>(2 * k_max + 1);

  PowerSpectrogram out;
  out.kind = SpectrogramKind::micro_doppler;
  out.n_freq = n_rows;
  out.n_time = stft_column_count(n_chirps, p);
  out.values.assign(out.n_freq * out.n_time, 0.0);
  out.freq_axis.resize(n_rows);
  for (int k = -k_max; k <= k_max; ++k) out.freq_axis[k + k_max] = k * v_res;
  out.t0 = stft_t0(p, cfg.chirp_s);
  out.hop_s = p.hop_chirps * cfg.chirp_s;

  const auto window = taper_window(p.taper, static_cast<std::size_t>(w));
  const Fft fft(static_cast<std::size_t>(w));
  const auto n_cols = static_cast<std::int64_t>(out.n_time);

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t c = 0; c < n_cols; ++c) {
    thread_local std::vector<std::complex<double>> buf;
    thread_local std::vector<double> energy;
    thread_local std::vector<std::complex<double>> mean;
    thread_local std::vector<double> column;
    buf.resize(static_cast<std::size_t>(w));
    energy.assign(static_cast<std::size_t>(n_gates), 0.0);
    mean.assign(static_cast<std::size_t>(n_gates), {});
    column.assign(static_cast<std::size_t>(w), 0.0);
    const std::size_t start = static_cast<std::size_t>(c) * p.hop_chirps;

    double strongest = 0.0;
    for (int g = 0; g < n_gates; ++g) {
      const cfloat* x = slow.data() + g * n_chirps + start;
      std::complex<double> sum{};
      for (int i = 0; i < w; ++i) sum += std::complex<double>(x[i].real(), x[i].imag());
      mean[g] = sum / static_cast<double>(w);
      double e = 0.0;
      for (int i = 0; i < w; ++i) e += std::norm(std::complex<double>(x[i].real(), x[i].imag()) - mean[g]);
      energy[g] = e;
      strongest = std::max(strongest, e);
    }
    if (strongest <= 0.0) continue;

    for (int g = 0; g < n_gates; ++g) {
      if (energy[g] < p.gate_threshold * strongest) continue;
      const cfloat* x = slow.data() + g * n_chirps + start;
      for (int i = 0; i < w; ++i) buf[i] = (std::complex<double>(x[i].real(), x[i].imag()) - mean[g]) * window[i];
      fft.forward(buf.data());
      for (int i = 0; i < w; ++i) column[i] += std::norm(buf[i]);
    }
    for (int k = -k_max; k <= k_max; ++k) {
      if (std::abs(k * v_res) <= p.notch_velocity) continue;
      out.at(static_cast<std::size_t>(k + k_max), static_cast<std::size_t>(c)) = column[((k % w) + w) % w];
    }
  }
  return out;
}

MicroMotionSpectrogram micro_doppler(const gaitsim::ChirpSource& source, const StftParams& p, Exec exec) {
  return to_grayscale(doppler_power(source, p, exec), p.dynamic_range_db);
}

}  // namespace gaitid::radardsp
