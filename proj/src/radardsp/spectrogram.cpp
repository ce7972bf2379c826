#include "gaitid/radardsp/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaitid/core/error.hpp"

namespace gaitid::radardsp {

std::string to_string(SpectrogramKind k) { return k == SpectrogramKind::micro_doppler ? "micro-doppler" : "micro-omega"; }

SpectrogramKind spectrogram_kind_from_string(const std::string& s) {
  if (s == "micro-doppler") return SpectrogramKind::micro_doppler;
  if (s == "micro-omega") return SpectrogramKind::micro_omega;
  throw ValidationError("kind", "unknown spectrogram kind \"" + s + "\"");
}

MicroMotionSpectrogram MicroMotionSpectrogram::columns(std::size_t first, std::size_t count) const {
  require(first + count <= n_time, "columns", "range exceeds spectrogram width");
  MicroMotionSpectrogram out = *this;
  out.n_time = count;
  out.t0 = time(first);
  out.values.assign(n_freq * count, 0.0f);
  for (std::size_t f = 0; f < n_freq; ++f) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(f * n_time + first), count,
                out.values.begin() + static_cast<std::ptrdiff_t>(f * count));
  }
  return out;
}

std::vector<float> to_grayscale(const std::vector<double>& power, double dynamic_range_db) {
  require(dynamic_range_db > 0, "dsp.dynamic_range_db", "must be positive");
  std::vector<float> out(power.size(), 0.0f);
  double peak = 0.0;
  for (double v : power) peak = std::max(peak, v);
  if (!(peak > 0.0)) return out;
  const double floor_db = 10.0 * std::log10(peak) - dynamic_range_db;
  for (std::size_t i = 0; i < power.size(); ++i) {
    if (power[i] <= 0.0) continue;
    const double g = (10.0 * std::log10(power[i]) - floor_db) / dynamic_range_db;
    out[i] = static_cast<float>(std::clamp(g, 0.0, 1.0));
  }
  return out;
}

MicroMotionSpectrogram to_grayscale(const PowerSpectrogram& power, double dynamic_range_db) {
  MicroMotionSpectrogram g;
  g.kind = power.kind;
  g.n_freq = power.n_freq;
  g.n_time = power.n_time;
  g.values = to_grayscale(power.values, dynamic_range_db);
  g.freq_axis = power.freq_axis;
  g.t0 = power.t0;
  g.hop_s = power.hop_s;
  g.dynamic_range_db = dynamic_range_db;
  return g;
}

SpectrogramPair synchronize(const MicroMotionSpectrogram& ud, const MicroMotionSpectrogram& uw) {
  require(ud.hop_s > 0 && std::abs(ud.hop_s - uw.hop_s) <= 1e-9 * ud.hop_s, "hop",
          "spectrograms use different hops; resampling is not supported");
  const double hop = ud.hop_s;
  const double start = std::max(ud.t0, uw.t0);
  const auto offset = [&](const MicroMotionSpectrogram& s) {
    return static_cast<std::size_t>(std::max(0.0, std::round((start - s.t0) / hop)));
  };
  const std::size_t a = offset(ud);
  const std::size_t b = offset(uw);
  require(a < ud.n_time && b < uw.n_time, "synchronize", "spectrograms share no time span");
  const std::size_t count = std::min(ud.n_time - a, uw.n_time - b);
  for (std::size_t i = 0; i < count; ++i) {
    require(std::abs(ud.time(a + i) - uw.time(b + i)) <= hop / 2, "synchronize",
            "column timestamps differ by more than hop/2");
  }
  return {ud.columns(a, count), uw.columns(b, count)};
}

}  // namespace gaitid::radardsp
