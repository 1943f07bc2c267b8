#pragma once

#include <stdexcept>
#include <string>

namespace heun {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the region where a series or expansion is defined (|z| >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A gamma-type denominator hits a pole (non-positive integer).
class PoleError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Series summation exhausted its term budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Evaluation point coincides with a singular point of the Heun equation.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace heun
