#pragma once

#include <stdexcept>
#include <string>

namespace quatflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation applied to a field in the wrong representation (physical vs spectral).
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// Spectral data that cannot come from a real-valued field.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Raised by the time stepper when the state stops being finite or grows
/// past the blow-up threshold.
class BlowUpError : public Error {
 public:
  BlowUpError(long step_index, double last_finite_norm, const std::string& what)
      : Error(what), step_index_(step_index), last_finite_norm_(last_finite_norm) {}

  long step_index() const noexcept { return step_index_; }
  double last_finite_norm() const noexcept { return last_finite_norm_; }

 private:
  long step_index_;
  double last_finite_norm_;
};

}  // namespace quatflow
