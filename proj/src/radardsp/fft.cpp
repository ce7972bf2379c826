#include "gaitid/radardsp/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gaitid/core/error.hpp"

namespace gaitid::radardsp {

std::string to_string(Taper t) { return t == Taper::hann ? "hann" : "rectangular"; }

Taper taper_from_string(const std::string& s) {
  if (s == "hann") return Taper::hann;
  if (s == "rectangular" || s == "rect") return Taper::rectangular;
  throw ValidationError("taper", "unknown taper \"" + s + "\"");
}

std::vector<double> taper_window(Taper taper, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (taper == Taper::hann) {
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

struct Fft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  require(n > 0, "fft", "length must be positive");
  std::lock_guard lock(planner_mutex());
  static std::map<std::size_t, std::shared_ptr<const Plans>> cache;
  auto& slot = cache[n];
  if (!slot) {
    auto plans = std::make_shared<Plans>();
    auto* buf = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    plans->fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans->inv = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plans->fwd || !plans->inv) throw std::runtime_error("fftw: planning failed");
    slot = std::move(plans);
  }
  plans_ = slot;
}

void Fft::forward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
}

void Fft::inverse(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->inv, p, p);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
}

}  // namespace gaitid::radardsp
