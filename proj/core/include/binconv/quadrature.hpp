#pragma once

#include <functional>
#include <span>
#include <string_view>

namespace binconv {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< Kronrod error estimate
  double l1 = 0.0;     ///< ∫|f|, the scale the tolerance is measured against
};

/// Adaptive 15-point Gauss-Kronrod on [lo, hi]. Never evaluates f at the
/// endpoints.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol, unsigned max_depth = 18);

/// Integrates over consecutive cut points and sums. Throws NumericalError
/// (carrying the error estimate) when the combined estimate exceeds
/// rel_tol relative to max(|value|, ∫|f|).
QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> cuts, double rel_tol,
                                  std::string_view what);

}  // namespace binconv
