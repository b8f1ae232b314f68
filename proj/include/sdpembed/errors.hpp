#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace sdpembed {

/// Input that violates a type invariant (non-PSD covariance, bad labels, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Problem too large for an exact algorithm.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Iterative numerical routine failed; carries the last residual it saw.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double residual = std::numeric_limits<double>::infinity())
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace sdpembed
