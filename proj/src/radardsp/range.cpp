#include "gaitid/radardsp/range.hpp"

#include <cmath>

#include "gaitid/core/error.hpp"

namespace gaitid::radardsp {

void range_transform(std::span<const cfloat> samples, int n_channels, int n_samples, const std::vector<double>& window,
                     const Fft& fft, std::span<cfloat> out) {
  const int n_bins = n_samples / 2;
  thread_local std::vector<std::complex<double>> buf;
  buf.resize(static_cast<std::size_t>(n_samples));
  for (int n = 0; n < n_channels; ++n) {
    const cfloat* x = samples.data() + static_cast<std::ptrdiff_t>(n) * n_samples;
    for (int m = 0; m < n_samples; ++m) {
      if (!std::isfinite(x[m].real()) || !std::isfinite(x[m].imag())) {
        throw ValidationError("cube", "non-finite sample");
      }
      buf[m] = std::complex<double>(x[m].real(), x[m].imag()) * window[m];
    }
    fft.forward(buf.data());
    cfloat* o = out.data() + static_cast<std::ptrdiff_t>(n) * n_bins;
    for (int b = 0; b < n_bins; ++b) o[b] = cfloat(static_cast<float>(buf[b].real()), static_cast<float>(buf[b].imag()));
  }
}

RangeProfiles range_profiles(const gaitsim::ChirpSource& source, Taper taper, int n_channels, Exec exec) {
  const auto& cfg = source.config();
  const int ns = cfg.samples_per_chirp;
  require(ns >= 8, "radar.samples_per_chirp", "range processing needs at least 8 samples");
  if (n_channels < 0) n_channels = cfg.n_virtual();
  require(n_channels >= 1 && n_channels <= cfg.n_virtual(), "channels", "out of range");

  RangeProfiles rp;
  rp.n_chirps = source.n_chirps();
  rp.n_channels = n_channels;
  rp.n_bins = ns / 2;
  rp.values.resize(rp.n_chirps * n_channels * rp.n_bins);

  const auto window = taper_window(taper, static_cast<std::size_t>(ns));
  const Fft fft(static_cast<std::size_t>(ns));
  const std::size_t per_chirp_in = static_cast<std::size_t>(n_channels) * ns;
  const std::size_t per_chirp_out = static_cast<std::size_t>(n_channels) * rp.n_bins;
  const auto count = static_cast<std::int64_t>(rp.n_chirps);

  ParallelGuard guard;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t k = 0; k < count; ++k) {
    guard.run([&] {
      thread_local std::vector<cfloat> raw;
      raw.resize(per_chirp_in);
      source.read_chirp(static_cast<std::size_t>(k), n_channels, raw);
      range_transform(raw, n_channels, ns, window, fft,
                      std::span<cfloat>(rp.values.data() + static_cast<std::size_t>(k) * per_chirp_out, per_chirp_out));
    });
  }
  guard.rethrow();
  return rp;
}

}  // namespace gaitid::radardsp
