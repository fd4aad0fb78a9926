#ifndef KMFLOW_ERRORS_HPP
#define KMFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kmflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two vectors (or an operator and a vector) disagree on dimension.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// An operator/schedule/problem specification is invalid.
class SpecError : public Error {
public:
  using Error::Error;
};

/// Requested prox has no supported closed form.
class UnsupportedProxError : public Error {
public:
  using Error::Error;
};

/// A numerical routine failed (singular solve, step-size underflow).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Trajectory left the divergence guard radius.
class DivergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Argument outside the mathematical domain (t < 0, bad interval).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A finite search bracket cannot realize the requested value.
class RangeExceeded : public Error {
public:
  using Error::Error;
};

/// An analysis hypothesis does not hold for the given inputs.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Not enough usable samples for the requested fit.
class InsufficientData : public Error {
public:
  using Error::Error;
};

}  // namespace kmflow

#endif
