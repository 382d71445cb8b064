#pragma once

#include <stdexcept>
#include <string>

namespace cpshift {

/// Thrown when an argument violates a documented precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a quadrature or series fails to meet its tolerance.
/// Carries the best available estimate so callers can decide what to do with it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// The integrand returned NaN or an infinity.
class NanIntegrandError : public std::runtime_error {
 public:
  explicit NanIntegrandError(double abscissa)
      : std::runtime_error("integrand is not finite at x = " + std::to_string(abscissa)),
        abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

}  // namespace cpshift
