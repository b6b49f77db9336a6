#pragma once

#include <stdexcept>
#include <string>

namespace oqr {

/// Invalid user configuration (bad keys, empty grids, unsupported states).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base class for failures of the numerical layers.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The adaptive stepper could not reach the requested tolerance.
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Population reached the top of the truncated basis.
class TruncationLeak : public NumericalError {
 public:
  TruncationLeak(const std::string& what, double leaked)
      : NumericalError(what), leaked_(leaked) {}
  double leaked() const { return leaked_; }

 private:
  double leaked_;
};

}  // namespace oqr
