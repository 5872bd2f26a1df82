#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace isocone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension (vector vs cone, weights vs graph, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant or an operation precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exact (enumerative) routine was asked to work above its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations. Carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_iterate,
                   double residual, long iterations)
      : Error(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
  long iterations_;
};

}  // namespace isocone
