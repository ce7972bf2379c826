#include "gaitid/radardsp/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaitid/core/error.hpp"

namespace gaitid::radardsp {

double phase_to_angle(double dphi, double wavelength, double spacing) {
  const double arg = wavelength * dphi / (2.0 * std::numbers::pi * spacing);
  return std::asin(std::clamp(arg, -1.0, 1.0));
}

int boresight_bin(int n_angle) { return n_angle / 2 - 1; }

std::vector<double> angle_axis(const gaitsim::RadarConfig& cfg, int n_angle) {
  std::vector<double> axis(static_cast<std::size_t>(n_angle));
  const int zero = boresight_bin(n_angle);
  for (int i = 0; i < n_angle; ++i) {
    const double dphi = 2.0 * std::numbers::pi * (i - zero) / n_angle;
    axis[i] = phase_to_angle(dphi, cfg.wavelength(), cfg.element_spacing());
  }
  return axis;
}

double angle_to_bin(double theta, const gaitsim::RadarConfig& cfg, int n_angle) {
  return n_angle * cfg.element_spacing() * std::sin(theta) / cfg.wavelength() + boresight_bin(n_angle);
}

RangeAoAMap beamform(std::span<const cfloat> profiles, int n_range, const gaitsim::RadarConfig& cfg,
                     const BeamformParams& params, double timestamp) {
  const int nv = cfg.n_virtual();
  require(params.padding >= 1, "dsp.angle_padding", "must be at least 1");
  require(profiles.size() >= static_cast<std::size_t>(nv) * n_range, "profiles", "expected N_virt channels");

  RangeAoAMap map;
  map.n_range = n_range;
  map.n_angle = params.padding * nv;
  map.values.resize(static_cast<std::size_t>(n_range) * map.n_angle);
  map.angle_axis = angle_axis(cfg, map.n_angle);
  map.range_axis.resize(static_cast<std::size_t>(n_range));
  for (int r = 0; r < n_range; ++r) map.range_axis[r] = r * cfg.range_resolution();
  map.timestamp = timestamp;

  const auto window = taper_window(params.taper, static_cast<std::size_t>(nv));
  const Fft fft(static_cast<std::size_t>(map.n_angle));
  const int zero = boresight_bin(map.n_angle);
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(map.n_angle));
  for (int r = 0; r < n_range; ++r) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (int n = 0; n < nv; ++n) {
      const cfloat v = profiles[static_cast<std::size_t>(n) * n_range + r];
      buf[n] = std::complex<double>(v.real(), v.imag()) * window[n];
    }
    // A channel ramp exp(+j*dphi*n) peaks at DFT index dphi*N/(2*pi) (mod N).
    fft.forward(buf.data());
    for (int i = 0; i < map.n_angle; ++i) {
      const int k = ((i - zero) % map.n_angle + map.n_angle) % map.n_angle;
      const auto v = buf[static_cast<std::size_t>(k)];
      map.values[static_cast<std::size_t>(r) * map.n_angle + i] =
          cfloat(static_cast<float>(v.real()), static_cast<float>(v.imag()));
    }
  }
  return map;
}

}  // namespace gaitid::radardsp
