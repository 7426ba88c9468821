#pragma once

#include <optional>

#include "binconv/market.hpp"
#include "binconv/payoff.hpp"

namespace binconv {

/// Standard normal distribution function, Φ(x) = erfc(-x/√2)/2.
double norm_cdf(double x);
double norm_pdf(double x);

/// Closed-form Black-Scholes quantities at one strike.
struct BsPoint {
  double d1 = 0.0;
  double d2 = 0.0;
  double call = 0.0;
  double digital_weak = 0.0;
  double digital_strict = 0.0;  ///< equals digital_weak: the lognormal law has no atoms
};

enum class ZeroStrike {
  Reject,  ///< a <= 0 throws InputError
  Limit,   ///< a == 0 returns the a -> 0+ limits (call = S0, digital = e^{-rT})
};

BsPoint bs_point(const MarketParams& m, double strike, ZeroStrike zero = ZeroStrike::Reject);

double bs_call(const MarketParams& m, double strike);
double bs_put(const MarketParams& m, double strike);
double bs_digital(const MarketParams& m, double strike);

/// Strike window outside which integrands of the form f'(a)·φ(d2(a))·poly(d2)
/// are negligible at `rel_tol`. The window is d2 ∈ [-Z, Z] mapped to strikes,
/// with Z grown past 8 until the Gaussian decay beats the polynomial bound.
struct StrikeDomain {
  double lower = 0.0;
  double upper = 0.0;
};

StrikeDomain strike_domain(const MarketParams& m, const std::optional<PolyBound>& bound,
                           double rel_tol);

/// e^{-rT} E[f(S_T)] under the lognormal law, by adaptive quadrature in the
/// Gaussian variable, split at every payoff breakpoint. The upper tail is cut
/// where the lognormal partial-moment bound implied by the polynomial
/// certificate drops below rel_tol times the running estimate.
double bs_price_payoff_oracle(const MarketParams& m, const PiecewisePayoff& payoff,
                              double rel_tol);

}  // namespace binconv
