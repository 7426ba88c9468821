#pragma once

#include <functional>
#include <map>
#include <vector>

#include "binconv/market.hpp"
#include "binconv/payoff.hpp"

namespace binconv {

/// (h/2) Σ_{k=0}^{n-1} (g(kh) + g((k+1)h)), h = b/n.
double trapezoid(const std::function<double(double)>& g, double b, int n);

/// Digital price of 1_{X > a} in the centred lattice built for strike a.
/// a = 0 returns e^{-rT}.
double centered_digital(const MarketParams& m, int n, double strike);

/// Density C(a) of the smooth-convergence constant:
/// e^{-rT} e^{-d2²/2}/√(2π) · B_n(a)|_{λ=0}.
double smooth_constant_density(const MarketParams& m, double strike);

/// C = ∫ f'(a) C(a) da, to relative tolerance 1e-8.
double smooth_constant_of(const MarketParams& m, const PiecewisePayoff& payoff);

struct SmoothOptions {
  /// Unit of the strike grid: the grid is [0, grid_scale · n^α]. Zero means
  /// "use the spot", i.e. the estimator runs on S/S0.
  double grid_scale = 0.0;
  /// Accept payoffs with jumps or kinks: trapezoid per piece and add
  /// centred-digital jump terms. Order guarantees then hold per piece only.
  bool allow_piecewise = false;
};

struct SmoothEstimate {
  int n = 0;
  double alpha = 0.0;
  double value = 0.0;
  double grid_scale = 1.0;
  double spacing = 0.0;       ///< grid_scale · n^{α-1}
  std::vector<double> grid;   ///< n+1 equidistant strikes on [0, grid_scale · n^α]
  double predicted_c = 0.0;   ///< limit of n·(value - V_BS)
  bool piecewise = false;     ///< true when jump/kink terms were added
};

/// Trapezoidal combination over the strike grid of f'(a_k) times the
/// centred-lattice digital at a_k. O(n²) time, O(n) memory.
/// Throws InputError for α outside (0, 1/3) or a payoff that is not
/// C3Smooth (unless allow_piecewise).
SmoothEstimate smooth_estimate(const MarketParams& m, const PiecewisePayoff& payoff, int n,
                               double alpha, const SmoothOptions& options = {});

struct RichardsonResult {
  std::map<int, double> extrapolated;  ///< R(n) = (2^β a_{2n} - a_n)/(2^β - 1)
  std::vector<int> skipped;            ///< n whose partner 2n was missing
  bool monotone_input = true;          ///< false when a_{2n} - a_n changes sign along the ladder
};

RichardsonResult richardson(const std::map<int, double>& values, double order);

}  // namespace binconv
