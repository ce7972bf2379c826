#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gaitid::radardsp {

enum class SpectrogramKind { micro_doppler, micro_omega };

std::string to_string(SpectrogramKind k);
SpectrogramKind spectrogram_kind_from_string(const std::string& s);

// Linear power before grayscale mapping; layout (n_freq, n_time) row-major.
struct PowerSpectrogram {
  SpectrogramKind kind = SpectrogramKind::micro_doppler;
  std::size_t n_freq = 0;
  std::size_t n_time = 0;
  std::vector<double> values;
  std::vector<double> freq_axis;  // m/s (micro-Doppler) or rad/s (micro-omega)
  double t0 = 0.0;                // timestamp of column 0, s
  double hop_s = 0.0;

  double at(std::size_t f, std::size_t t) const { return values[f * n_time + t]; }
  double& at(std::size_t f, std::size_t t) { return values[f * n_time + t]; }
};

// Grayscale time-frequency image in [0, 1]; layout (n_freq, n_time) row-major.
struct MicroMotionSpectrogram {
  SpectrogramKind kind = SpectrogramKind::micro_doppler;
  std::size_t n_freq = 0;
  std::size_t n_time = 0;
  std::vector<float> values;
  std::vector<double> freq_axis;
  double t0 = 0.0;
  double hop_s = 0.0;
  double dynamic_range_db = 40.0;

  float at(std::size_t f, std::size_t t) const { return values[f * n_time + t]; }
  float& at(std::size_t f, std::size_t t) { return values[f * n_time + t]; }
  double time(std::size_t t) const { return t0 + static_cast<double>(t) * hop_s; }
  double f_min() const { return freq_axis.empty() ? 0.0 : freq_axis.front(); }
  double f_max() const { return freq_axis.empty() ? 0.0 : freq_axis.back(); }

  // Columns [first, first + count) as a new spectrogram.
  MicroMotionSpectrogram columns(std::size_t first, std::size_t count) const;
};

// x -> clamp((dB(x) - (max_dB - dr)) / dr, 0, 1) with dB = 10*log10; zero
// and negative inputs map to 0, an all-zero input to all zeros.
std::vector<float> to_grayscale(const std::vector<double>& power, double dynamic_range_db = 40.0);

MicroMotionSpectrogram to_grayscale(const PowerSpectrogram& power, double dynamic_range_db = 40.0);

struct SpectrogramPair {
  MicroMotionSpectrogram ud;  // micro-Doppler
  MicroMotionSpectrogram uw;  // micro-omega
};

// Truncates both spectrograms to their common time span. Throws
// ValidationError when the hops differ or the columns cannot be aligned to
// within hop/2.
SpectrogramPair synchronize(const MicroMotionSpectrogram& ud, const MicroMotionSpectrogram& uw);

}  // namespace gaitid::radardsp
