#pragma once

#include <stdexcept>
#include <string>

namespace degen {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise malformed numeric input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A configuration value is missing, mistyped, or out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The symbol's minimum is attained at the origin, so there is no hypersurface.
class DegenerateSurface : public Error {
 public:
  using Error::Error;
};

/// A tabulated Fourier transform was queried outside the band it resolves.
class OutOfBand : public Error {
 public:
  using Error::Error;
};

/// An assembled operator failed an internal sanity check (e.g. Hermiticity).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// An iterative eigensolver ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace degen
