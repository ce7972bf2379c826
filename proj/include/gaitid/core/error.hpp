#pragma once

#include <stdexcept>
#include <string>

namespace gaitid {

// Bad parameter or contract violation. `key` names the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& key, const std::string& what) {
  if (!cond) throw ValidationError(key, what);
}

}  // namespace gaitid
