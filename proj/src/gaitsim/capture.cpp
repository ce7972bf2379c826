#include "gaitid/gaitsim/capture.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gaitid/core/error.hpp"
#include "gaitid/core/random.hpp"

namespace gaitid::gaitsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

RawCube::RawCube(RadarConfig cfg, std::size_t n_chirps)
    : config_(std::move(cfg)),
      n_chirps_(n_chirps),
      samples_(n_chirps * static_cast<std::size_t>(config_.n_virtual() * config_.samples_per_chirp)) {}

void RawCube::read_chirp(std::size_t chirp, int n_channels, std::span<cfloat> out) const {
  const std::size_t count = static_cast<std::size_t>(n_channels) * n_samples();
  if (chirp >= n_chirps_ || n_channels > this->n_channels() || out.size() < count) {
    throw ValidationError("cube", "chirp request out of range");
  }
  const cfloat* src = samples_.data() + chirp * n_channels_x_samples();
  std::copy(src, src + count, out.begin());
}

void RawCube::validate() const {
  require(samples_.size() == n_chirps_ * n_channels_x_samples(), "cube", "dimension product does not match payload");
  for (const auto& v : samples_) {
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), "cube", "non-finite sample");
  }
}

std::size_t chirp_count(double duration, const RadarConfig& cfg) {
  if (!(duration > 0)) return 0;
  const double n = std::ceil(duration / cfg.chirp_s - 1e-9);
  return static_cast<std::size_t>(std::max(0.0, n));
}

SyntheticSource::SyntheticSource(std::shared_ptr<const MotionModel> motion, RadarConfig cfg, std::uint64_t seed)
    : motion_(std::move(motion)), config_(std::move(cfg)), seed_(seed) {
  config_.validate();
  n_chirps_ = chirp_count(motion_->duration(), config_);
}

void SyntheticSource::synthesize(std::size_t chirp, int n_channels, std::span<std::complex<double>> out) const {
  const RadarConfig& c = config_;
  const int ns = c.samples_per_chirp;
  thread_local std::vector<ScattererState> states;
  motion_->states(static_cast<double>(chirp) * c.chirp_s, states);

  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n_channels) * ns, std::complex<double>{});
  auto* acc = reinterpret_cast<double*>(out.data());

  const double lambda = c.wavelength();
  const double spacing = c.element_spacing();
  const Eigen::Vector3d axis = array_axis_vector(c.array_axis);

  for (const ScattererState& s : states) {
    const double range = s.position.norm();
    const double sin_theta = s.position.dot(axis) / range;
    // f_b * T_ch: beat cycles completed over one chirp.
    const double beat_cycles = 2.0 * c.bandwidth_hz * range / RadarConfig::kSpeedOfLight;
    const double step = kTwoPi * beat_cycles / ns;
    const double step_re = std::cos(step);
    const double step_im = std::sin(step);
    const double carrier = -2.0 * kTwoPi * range / lambda;
    const double array_step = kTwoPi * spacing * sin_theta / lambda;

    for (int n = 0; n < n_channels; ++n) {
      const double phase = carrier + array_step * n;
      double re = s.rcs * std::cos(phase);
      double im = s.rcs * std::sin(phase);
      double* o = acc + 2 * static_cast<std::ptrdiff_t>(n) * ns;
      for (int m = 0; m < ns; ++m) {
        o[2 * m] += re;
        o[2 * m + 1] += im;
        const double next_re = re * step_re - im * step_im;
        im = re * step_im + im * step_re;
        re = next_re;
      }
    }
  }
}

void SyntheticSource::clean_chirp(std::size_t chirp, int channel, std::span<std::complex<double>> out) const {
  const int ns = config_.samples_per_chirp;
  std::vector<std::complex<double>> all(static_cast<std::size_t>(channel + 1) * ns);
  synthesize(chirp, channel + 1, all);
  std::copy(all.begin() + static_cast<std::ptrdiff_t>(channel) * ns, all.end(), out.begin());
}

void SyntheticSource::read_chirp(std::size_t chirp, int n_channels, std::span<cfloat> out) const {
  const int ns = config_.samples_per_chirp;
  const int nv = config_.n_virtual();
  if (chirp >= n_chirps_ || n_channels > nv || out.size() < static_cast<std::size_t>(n_channels) * ns) {
    throw ValidationError("capture", "chirp request out of range");
  }
  thread_local std::vector<std::complex<double>> buf;
  buf.resize(static_cast<std::size_t>(n_channels) * ns);
  synthesize(chirp, n_channels, buf);

  const double sigma = config_.noise_sigma();
  const double component = sigma / std::sqrt(2.0);
  const std::uint64_t noise_seed = split_seed(seed_, 0x4E4F495345ULL);
  for (int n = 0; n < n_channels; ++n) {
    for (int m = 0; m < ns; ++m) {
      const std::size_t i = static_cast<std::size_t>(n) * ns + m;
      std::complex<double> v = buf[i];
      if (sigma > 0) {
        const std::uint64_t counter = (static_cast<std::uint64_t>(chirp) * nv + n) * ns + m;
        const auto [g1, g2] = gaussian_pair(noise_seed, counter);
        v += std::complex<double>(component * g1, component * g2);
      }
      out[i] = cfloat(static_cast<float>(v.real()), static_cast<float>(v.imag()));
    }
  }
}

RawCube simulate_capture(const MotionModel& motion, const RadarConfig& cfg, std::uint64_t seed, Exec exec) {
  // Non-owning handle; `motion` outlives this call.
  std::shared_ptr<const MotionModel> handle(&motion, [](const MotionModel*) {});
  const SyntheticSource source(handle, cfg, seed);
  const std::size_t n = source.n_chirps();
  require(n <= cfg.chirp_budget, "radar.chirp_budget",
          "capture needs " + std::to_string(n) + " chirps, budget is " + std::to_string(cfg.chirp_budget));

  RawCube cube(cfg, n);
  const int nv = cfg.n_virtual();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t k = 0; k < count; ++k) {
    source.read_chirp(static_cast<std::size_t>(k), nv, cube.chirp(static_cast<std::size_t>(k)));
  }
  return cube;
}

RawCube simulate_capture(const SubjectModel& model, const WalkScenario& scenario, const RadarConfig& cfg,
                         std::uint64_t seed, Exec exec) {
  const WalkingSubject walker(model, scenario);
  return simulate_capture(walker, cfg, seed, exec);
}

}  // namespace gaitid::gaitsim
