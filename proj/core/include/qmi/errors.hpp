#pragma once

#include <stdexcept>
#include <string>

namespace qmi {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (k > n, m out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration (bad tolerances, empty grids, unwritable paths).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature gave up. Carries the best estimate reached so far.
class QuadratureError : public Error {
 public:
  enum class Kind { NonConvergence, NonFiniteIntegrand };

  QuadratureError(Kind kind, std::string what, double best_value, double best_err,
                  double abscissa)
      : Error(std::move(what)),
        kind_(kind),
        best_value_(best_value),
        best_err_(best_err),
        abscissa_(abscissa) {}

  Kind kind() const noexcept { return kind_; }
  double best_value() const noexcept { return best_value_; }
  double best_err() const noexcept { return best_err_; }
  /// Offending abscissa for NonFiniteIntegrand; NaN otherwise.
  double abscissa() const noexcept { return abscissa_; }

 private:
  Kind kind_;
  double best_value_;
  double best_err_;
  double abscissa_;
};

}  // namespace qmi
