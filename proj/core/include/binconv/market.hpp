#pragma once

#include <cmath>

namespace binconv {

/// Black-Scholes market data shared by the limit model and every lattice.
/// Validated on construction: spot, volatility and maturity must be
/// positive and finite.
class MarketParams {
 public:
  MarketParams(double spot, double volatility, double rate, double maturity);

  double spot() const noexcept { return spot_; }
  double volatility() const noexcept { return volatility_; }
  double rate() const noexcept { return rate_; }
  double maturity() const noexcept { return maturity_; }

  /// e^{-rT}
  double discount() const noexcept { return std::exp(-rate_ * maturity_); }
  /// σ√T
  double total_vol() const noexcept { return volatility_ * std::sqrt(maturity_); }

  friend bool operator==(const MarketParams&, const MarketParams&) = default;

 private:
  double spot_;
  double volatility_;
  double rate_;
  double maturity_;
};

}  // namespace binconv
