#pragma once

#include <stdexcept>
#include <string>

namespace nsk {

/// Invalid input: bad parameter value, schema violation, grid mismatch.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// det(M) = 0: the momenta cannot be defined by the Legendre transform.
class DegenerateParametersError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A numerical run failed (negative density, divergence).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time, long long step)
      : std::runtime_error(what), time_(time), step_(step) {}

  double time() const noexcept { return time_; }
  long long step() const noexcept { return step_; }

 private:
  double time_;
  long long step_;
};

}  // namespace nsk
