#pragma once

#include <exception>
#include <mutex>

namespace gaitid {

// Selects between the OpenMP kernel and its single-threaded twin. Both
// produce bit-identical results; the serial form is what tests pin against.
enum class Exec { serial, parallel };

// Exceptions must not escape an OpenMP region. Loop bodies run through
// guard.run(...) and the first captured exception is rethrown afterwards.
class ParallelGuard {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace gaitid
