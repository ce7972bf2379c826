#pragma once

#include <cstddef>
#include <optional>

namespace gaitid::gaitsim {

// Orientation of the virtual uniform linear array. Elevation measures the
// vertical angle of arrival; azimuth the horizontal one.
enum class ArrayAxis { elevation, azimuth };

struct RadarConfig {
  static constexpr double kSpeedOfLight = 299'792'458.0;

  double carrier_hz = 77e9;
  double bandwidth_hz = 0.25e9;
  double chirp_s = 80e-6;
  int samples_per_chirp = 112;
  int chirps_per_window = 512;
  int n_tx = 2;
  int n_rx = 16;
  std::optional<double> element_spacing_m;  // half wavelength when unset
  double noise_snr_db = 10.0;               // per channel, unit-amplitude reference; +inf disables noise
  ArrayAxis array_axis = ArrayAxis::elevation;
  std::size_t chirp_budget = 8192;  // max chirps materialised in one RawCube

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  int n_virtual() const { return n_tx * n_rx; }
  double element_spacing() const { return element_spacing_m.value_or(wavelength() / 2.0); }
  // 3 dB beamwidth of the virtual array, rad.
  double angle_resolution() const { return 1.78 / n_virtual(); }
  double velocity_resolution() const { return wavelength() / (2.0 * chirps_per_window * chirp_s); }
  double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }
  double sample_rate() const { return samples_per_chirp / chirp_s; }
  int n_range_bins() const { return samples_per_chirp / 2; }
  // Standard deviation of the complex noise (total over I and Q); 0 when disabled.
  double noise_sigma() const;

  // Throws ValidationError naming the first offending field.
  void validate() const;
};

}  // namespace gaitid::gaitsim
