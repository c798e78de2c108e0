#ifndef ENTROFILT_ERRORS_HPP_
#define ENTROFILT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace entrofilt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad order, mesh size, unknown case or boundary tag.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state with zero density was handed to a conversion.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or vacuum state reached the flux evaluation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The element mean violates the admissibility constraints, so no filter
/// strength can repair the element. Signals a CFL or Riemann solver problem.
class MeanViolationError : public Error {
 public:
  MeanViolationError(const std::string& what, int element = -1)
      : Error(what), element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

/// The fully filtered (mean-only) element failed the constraint check.
class InfeasibleFilterError : public Error {
 public:
  InfeasibleFilterError(const std::string& what, int element = -1)
      : Error(what), element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

/// Newton iteration in the exact Riemann solver did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace entrofilt

#endif  // ENTROFILT_ERRORS_HPP_
