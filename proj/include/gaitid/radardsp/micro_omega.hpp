#pragma once

#include <vector>

#include "gaitid/core/exec.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/radardsp/beamform.hpp"
#include "gaitid/radardsp/micro_doppler.hpp"
#include "gaitid/radardsp/spectrogram.hpp"

namespace gaitid::radardsp {

struct OmegaParams {
  double window_s = 0.25;
  double omega_max = 0.5;  // rad/s
  // Number of equal intervals across [-omega_max, omega_max]; the grid has
  // n_omega_bins + 1 rows so that 0 and both limits are represented.
  int n_omega_bins = 64;
  BeamformParams beam;
  double gate_threshold = 0.1;
  double dynamic_range_db = 40.0;
  // Subtract each column's minimum over omega. Every track crosses the
  // strongest scatterers for part of a short window, so without this the
  // rate contrast is only a dB or two.
  bool remove_floor = true;

  double omega_step() const { return 2.0 * omega_max / n_omega_bins; }
  void validate() const;
};

// Range-collapsed AoA power profile of one chirp: beamformed power summed
// over the range gates holding >= gate_threshold of the strongest gate.
std::vector<double> aoa_profile(const gaitsim::ChirpSource& source, std::size_t chirp, const OmegaParams& p);

// Angular-rate filter bank over AoA profiles taken once per STFT hop (at the
// centre chirp of each micro-Doppler window). For each column the profiles
// inside a window of window_s are shifted along theta0 + omega*tau and summed;
// the best theta0 per omega gives that row's energy. Column k of the result
// shares its timestamp with micro-Doppler column k + m, where m is the
// half-window in hops (columns without a full window are not produced).
PowerSpectrogram omega_power(const gaitsim::ChirpSource& source, const StftParams& stft, const OmegaParams& p = {},
                             Exec exec = Exec::parallel);

MicroMotionSpectrogram micro_omega(const gaitsim::ChirpSource& source, const StftParams& stft,
                                   const OmegaParams& p = {}, Exec exec = Exec::parallel);

}  // namespace gaitid::radardsp
