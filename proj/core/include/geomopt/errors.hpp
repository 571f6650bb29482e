#pragma once

#include <stdexcept>
#include <string>

namespace geomopt {

/// Base class for every error raised by the library. The CLI maps the
/// concrete type to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (dimensions, non-finite entries, bad flags).
class InputError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge or produced a non-finite value.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Rank-zero matrix or a system with no usable rows.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Problem exceeds a desk-scale enumeration cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain of the regularizer.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotOptimalError : public Error {
 public:
  using Error::Error;
};

/// A LASSO coordinate is neither tight at +-eta nor strictly inside.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplingError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Unknown or malformed configuration key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace geomopt
