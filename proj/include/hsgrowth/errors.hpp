#pragma once

#include <stdexcept>
#include <string>

namespace hsgrowth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

class IncompatibleGrids : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures. The CLI maps these to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IterationLimitExceeded : public NumericalError {
 public:
  IterationLimitExceeded(int iterations, double final_residual)
      : NumericalError("elliptic solve did not converge after " +
                       std::to_string(iterations) +
                       " iterations (residual " +
                       std::to_string(final_residual) + ")"),
        iterations_(iterations),
        final_residual_(final_residual) {}

  int iterations() const noexcept { return iterations_; }
  double final_residual() const noexcept { return final_residual_; }

 private:
  int iterations_;
  double final_residual_;
};

class CflViolation : public NumericalError {
 public:
  CflViolation(double dt, double bound)
      : NumericalError("time step " + std::to_string(dt) +
                       " exceeds the strict CFL bound " +
                       std::to_string(bound)),
        dt_(dt),
        bound_(bound) {}

  double dt() const noexcept { return dt_; }
  double bound() const noexcept { return bound_; }

 private:
  double dt_;
  double bound_;
};

class NonFiniteState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hsgrowth
