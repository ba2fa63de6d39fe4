#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace ioqfr {

/// Compact scientific formatting for error messages.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: the inputs were well formed but the computation cannot proceed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The model or its operators are inconsistent.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (command line or JSON config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPSD : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SourceNotTraceless : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ActivityDegenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PureDissipativeViolated : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotIrreducible : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The generator has no unique, exponentially attracting stationary state.
/// Carries the eigenvalues that triggered the rejection.
class NotMixing : public NumericalError {
 public:
  NotMixing(const std::string& what, std::vector<std::complex<double>> offending)
      : NumericalError(what), offending_(std::move(offending)) {}

  const std::vector<std::complex<double>>& offending() const noexcept { return offending_; }

 private:
  std::vector<std::complex<double>> offending_;
};

class DimMismatch : public ModelError {
 public:
  using ModelError::ModelError;
};

class DuplicateChannel : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace ioqfr
