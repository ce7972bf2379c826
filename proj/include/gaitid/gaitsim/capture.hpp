#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gaitid/core/exec.hpp"
#include "gaitid/gaitsim/kinematics.hpp"
#include "gaitid/gaitsim/radar_config.hpp"

namespace gaitid::gaitsim {

using cfloat = std::complex<float>;

// Anything that can hand out the IF samples of one chirp. Implemented by a
// materialised RawCube and by the on-demand synthesizer, which lets long
// captures stream through the DSP without holding every sample in memory.
class ChirpSource {
 public:
  virtual ~ChirpSource() = default;
  virtual const RadarConfig& config() const = 0;
  virtual std::size_t n_chirps() const = 0;
  // Writes channels [0, n_channels) of `chirp`, channel-major, N_S samples each.
  virtual void read_chirp(std::size_t chirp, int n_channels, std::span<cfloat> out) const = 0;

  double chirp_period() const { return config().chirp_s; }
};

// Complex IF samples indexed (chirp, virtual channel, fast-time sample).
class RawCube final : public ChirpSource {
 public:
  RawCube() = default;
  RawCube(RadarConfig cfg, std::size_t n_chirps);

  const RadarConfig& config() const override { return config_; }
  std::size_t n_chirps() const override { return n_chirps_; }
  void read_chirp(std::size_t chirp, int n_channels, std::span<cfloat> out) const override;

  int n_channels() const { return config_.n_virtual(); }
  int n_samples() const { return config_.samples_per_chirp; }
  std::size_t n_channels_x_samples() const { return static_cast<std::size_t>(n_channels()) * n_samples(); }
  cfloat& at(std::size_t chirp, int channel, int sample) {
    return samples_[chirp * n_channels_x_samples() + static_cast<std::size_t>(channel) * n_samples() + sample];
  }
  const cfloat& at(std::size_t chirp, int channel, int sample) const {
    return samples_[chirp * n_channels_x_samples() + static_cast<std::size_t>(channel) * n_samples() + sample];
  }
  std::span<cfloat> chirp(std::size_t k) {
    return {samples_.data() + k * n_channels_x_samples(), n_channels_x_samples()};
  }
  std::vector<cfloat>& samples() { return samples_; }
  const std::vector<cfloat>& samples() const { return samples_; }

  // Throws ValidationError on non-finite samples or a size mismatch.
  void validate() const;

 private:
  RadarConfig config_;
  std::size_t n_chirps_ = 0;
  std::vector<cfloat> samples_;
};

// Stop-and-hop FMCW synthesis. For scatterer i at range R and array angle
// theta the sample (chirp k, channel n, fast time m) is
//   rcs_i * exp(j*(2*pi*f_b*m/f_s - 4*pi*R/lambda + 2*pi*d_a*n*sin(theta)/lambda))
// with f_b = 2*B*R/(c*T_ch); states are frozen at t = k*T_ch. Noise is a
// counter-based complex Gaussian keyed by (seed, k, n, m), so any chirp can
// be produced independently and in any order.
class SyntheticSource final : public ChirpSource {
 public:
  SyntheticSource(std::shared_ptr<const MotionModel> motion, RadarConfig cfg, std::uint64_t seed);

  const RadarConfig& config() const override { return config_; }
  std::size_t n_chirps() const override { return n_chirps_; }
  void read_chirp(std::size_t chirp, int n_channels, std::span<cfloat> out) const override;

  // Double-precision noiseless samples of one chirp/channel (used by
  // analytic checks).
  void clean_chirp(std::size_t chirp, int channel, std::span<std::complex<double>> out) const;

  const MotionModel& motion() const { return *motion_; }
  std::uint64_t seed() const { return seed_; }

 private:
  void synthesize(std::size_t chirp, int n_channels, std::span<std::complex<double>> out) const;

  std::shared_ptr<const MotionModel> motion_;
  RadarConfig config_;
  std::uint64_t seed_;
  std::size_t n_chirps_;
};

// Number of chirps that start inside [0, duration).
std::size_t chirp_count(double duration, const RadarConfig& cfg);

// Materialises a capture. Throws ValidationError("radar.chirp_budget") when
// the capture exceeds cfg.chirp_budget.
RawCube simulate_capture(const MotionModel& motion, const RadarConfig& cfg, std::uint64_t seed,
                         Exec exec = Exec::parallel);
RawCube simulate_capture(const SubjectModel& model, const WalkScenario& scenario, const RadarConfig& cfg,
                         std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace gaitid::gaitsim
