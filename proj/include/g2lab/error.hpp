#pragma once

#include <stdexcept>
#include <string>

namespace g2lab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad coordinates, shape mismatch, p <= 0, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The request is well-formed but exceeds a documented size or feature limit.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver stopped at its iteration cap before reaching tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double gap() const noexcept { return upper_ - lower_; }

 private:
  double lower_;
  double upper_;
};

/// A randomized generator exhausted its retries.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A property that the underlying theorem guarantees did not hold. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace g2lab
