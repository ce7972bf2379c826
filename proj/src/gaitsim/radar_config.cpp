#include "gaitid/gaitsim/radar_config.hpp"

#include <cmath>

#include "gaitid/core/error.hpp"

namespace gaitid::gaitsim {

double RadarConfig::noise_sigma() const {
  if (std::isinf(noise_snr_db) && noise_snr_db > 0) return 0.0;
  return std::pow(10.0, -noise_snr_db / 20.0);
}

void RadarConfig::validate() const {
  require(carrier_hz > 0, "radar.carrier_hz", "must be positive");
  require(bandwidth_hz > 0, "radar.bandwidth_hz", "must be positive");
  require(chirp_s > 0, "radar.chirp_s", "must be positive");
  require(samples_per_chirp >= 8 && samples_per_chirp % 2 == 0, "radar.samples_per_chirp",
          "must be even and at least 8");
  require(chirps_per_window >= 2, "radar.chirps_per_window", "must be at least 2");
  require(n_tx >= 1, "radar.n_tx", "must be positive");
  require(n_rx >= 1, "radar.n_rx", "must be positive");
  require(n_virtual() >= 2, "radar.n_rx", "virtual array needs at least two elements");
  if (element_spacing_m) {
    require(*element_spacing_m > 0, "radar.element_spacing_m", "must be positive");
    require(*element_spacing_m <= wavelength() / 2.0 * (1.0 + 1e-12), "radar.element_spacing_m",
            "must not exceed half a wavelength (grating lobes)");
  }
  require(!std::isnan(noise_snr_db) && noise_snr_db != -INFINITY, "radar.noise_snr_db", "must be a number or +inf");
  require(chirp_budget > 0, "radar.chirp_budget", "must be positive");
}

}  // namespace gaitid::gaitsim
