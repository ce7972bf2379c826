#pragma once

#include "gaitid/core/exec.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/radardsp/fft.hpp"
#include "gaitid/radardsp/spectrogram.hpp"

namespace gaitid::radardsp {

struct StftParams {
  int window_chirps = 512;
  int hop_chirps = 128;
  Taper taper = Taper::hann;        // slow time
  Taper range_taper = Taper::hann;  // fast time
  double gate_threshold = 0.1;      // fraction of the strongest gate's energy
  double notch_velocity = 0.02;     // m/s, bins with |v| <= notch are zeroed
  double max_velocity = 6.0;        // m/s, bins beyond are dropped
  double dynamic_range_db = 40.0;

  void validate() const;
};

std::size_t stft_column_count(std::size_t n_chirps, const StftParams& p);
// Timestamp of column 0 (centre of the first window) and column spacing, s.
double stft_t0(const StftParams& p, double chirp_s);

// Per window: static-clutter removal (slow-time mean), taper, Doppler DFT per
// range gate, power summed over gates holding >= gate_threshold of the
// strongest gate's energy. Rows are velocities k*v_res with |k*v_res| <=
// max_velocity, positive when approaching.
PowerSpectrogram doppler_power(const gaitsim::ChirpSource& source, const StftParams& p = {},
                               Exec exec = Exec::parallel);

MicroMotionSpectrogram micro_doppler(const gaitsim::ChirpSource& source, const StftParams& p = {},
                                     Exec exec = Exec::parallel);

}  // namespace gaitid::radardsp
