#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ccce {

// Malformed arguments: out-of-range indices, bad dimensions, invalid
// probabilities and so on.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A generated problem would exceed a configured size cap.
class SizeError : public InputError {
 public:
  using InputError::InputError;
};

// The solver ran out of iterations or lost numerical consistency. Distinct
// from an infeasible or unbounded problem.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No chance-constrained correlated equilibrium exists for the given
// confidence level and noise levels.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(double alpha, std::vector<double> sigmas);

  double alpha() const { return alpha_; }
  const std::vector<double>& sigmas() const { return sigmas_; }

 private:
  double alpha_;
  std::vector<double> sigmas_;
};

}  // namespace ccce
