#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace gaitid::radardsp {

enum class Taper { rectangular, hann };

std::string to_string(Taper t);
Taper taper_from_string(const std::string& s);

// Periodic window of length n (Hann: 0.5 - 0.5*cos(2*pi*i/n)).
std::vector<double> taper_window(Taper taper, std::size_t n);

// In-place complex DFT of a fixed length backed by an FFTW plan. Plans are
// built once per length and shared; execution is thread-safe.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  // X[k] = sum_m x[m] exp(-j*2*pi*k*m/n)
  void forward(std::complex<double>* data) const;
  // x[m] = (1/n) sum_k X[k] exp(+j*2*pi*k*m/n)
  void inverse(std::complex<double>* data) const;

 private:
  struct Plans;
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace gaitid::radardsp
