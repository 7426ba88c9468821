#pragma once

#include <stdexcept>
#include <string>

namespace binconv {

/// Invalid caller input: bad parameters, malformed payoff ids, config
/// problems. The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not deliver its contract (quadrature budget
/// exhausted, too few usable points for a fit). The CLI maps it to exit
/// code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  /// Error estimate at the point of failure, when one exists.
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace binconv
