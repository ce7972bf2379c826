#pragma once

#include <span>
#include <vector>

#include "gaitid/gaitsim/radar_config.hpp"
#include "gaitid/radardsp/fft.hpp"
#include "gaitid/radardsp/range.hpp"

namespace gaitid::radardsp {

struct BeamformParams {
  int padding = 4;  // angle DFT length = padding * N_virt
  Taper taper = Taper::hann;
};

// Range-angle image of one chirp, layout (n_range, n_angle). Angle bin i holds
// the inter-element phase step dphi = 2*pi*(i - (n_angle/2 - 1))/n_angle, so
// the axis covers dphi in (-pi, pi] and bin n_angle/2 - 1 is boresight.
struct RangeAoAMap {
  int n_range = 0;
  int n_angle = 0;
  std::vector<cfloat> values;
  std::vector<double> angle_axis;  // rad
  std::vector<double> range_axis;  // m
  double timestamp = 0.0;

  cfloat at(int range_bin, int angle_bin) const { return values[range_bin * n_angle + angle_bin]; }
};

// theta = arcsin(lambda * dphi / (2*pi*d_a)), argument clamped to [-1, 1].
double phase_to_angle(double dphi, double wavelength, double spacing);

int boresight_bin(int n_angle);
std::vector<double> angle_axis(const gaitsim::RadarConfig& cfg, int n_angle);
// Fractional angle-bin position of angle theta (inverse of angle_axis).
double angle_to_bin(double theta, const gaitsim::RadarConfig& cfg, int n_angle);

// `profiles` holds (N_virt, n_range) range bins of one chirp.
RangeAoAMap beamform(std::span<const cfloat> profiles, int n_range, const gaitsim::RadarConfig& cfg,
                     const BeamformParams& params = {}, double timestamp = 0.0);

}  // namespace gaitid::radardsp
