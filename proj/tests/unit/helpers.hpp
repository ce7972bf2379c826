#pragma once

#include <complex>
#include <memory>
#include <random>
#include <vector>

#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/gaitsim/kinematics.hpp"

namespace testing {

using namespace gaitid;

inline gaitsim::RadarConfig noiseless() {
  gaitsim::RadarConfig c;
  c.noise_snr_db = std::numeric_limits<double>::infinity();
  return c;
}

inline std::shared_ptr<gaitsim::PointTarget> point(double range, double v, double angle, double rate, double length_s) {
  auto p = std::make_shared<gaitsim::PointTarget>();
  p->range0 = range;
  p->radial_velocity = v;
  p->angle0 = angle;
  p->angular_rate = rate;
  p->length_s = length_s;
  return p;
}

// Several independent point targets, for multi-scatterer checks.
struct MultiPoint final : gaitsim::MotionModel {
  std::vector<gaitsim::PointTarget> points;
  double length_s = 0.1;

  double duration() const override { return length_s; }
  void states(double t, std::vector<gaitsim::ScattererState>& out) const override {
    out.clear();
    std::vector<gaitsim::ScattererState> one;
    for (const auto& p : points) {
      p.states(t, one);
      out.push_back(one[0]);
    }
  }
};

// Multiplies every sample of another source by a fixed complex factor.
class Rotated final : public gaitsim::ChirpSource {
 public:
  Rotated(const gaitsim::ChirpSource& base, std::complex<float> factor) : base_(base), factor_(factor) {}
  const gaitsim::RadarConfig& config() const override { return base_.config(); }
  std::size_t n_chirps() const override { return base_.n_chirps(); }
  void read_chirp(std::size_t chirp, int n_channels, std::span<gaitsim::cfloat> out) const override {
    base_.read_chirp(chirp, n_channels, out);
    for (auto& x : out) x *= factor_;
  }

 private:
  const gaitsim::ChirpSource& base_;
  std::complex<float> factor_;
};

template <class T>
std::vector<T> random_values(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(u(g));
  return v;
}

}  // namespace testing
