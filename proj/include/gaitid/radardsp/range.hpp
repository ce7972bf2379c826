#pragma once

#include <span>
#include <vector>

#include "gaitid/core/exec.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/radardsp/fft.hpp"

namespace gaitid::radardsp {

using gaitsim::cfloat;

// Positive-beat half of the fast-time spectrum, indexed (chirp, channel, bin);
// bin b corresponds to range b * range_resolution.
struct RangeProfiles {
  std::size_t n_chirps = 0;
  int n_channels = 0;
  int n_bins = 0;
  std::vector<cfloat> values;

  cfloat at(std::size_t chirp, int channel, int bin) const {
    return values[(chirp * n_channels + channel) * n_bins + bin];
  }
};

// Tapers and transforms one chirp: `samples` holds n_channels * N_S values,
// `out` receives n_channels * N_S/2 bins.
void range_transform(std::span<const cfloat> samples, int n_channels, int n_samples, const std::vector<double>& window,
                     const Fft& fft, std::span<cfloat> out);

// n_channels < 0 selects every virtual channel.
RangeProfiles range_profiles(const gaitsim::ChirpSource& source, Taper taper = Taper::hann, int n_channels = -1,
                             Exec exec = Exec::parallel);

}  // namespace gaitid::radardsp
