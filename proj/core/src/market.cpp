#include "binconv/market.hpp"

#include <string>

#include "binconv/errors.hpp"

namespace binconv {

MarketParams::MarketParams(double spot, double volatility, double rate, double maturity)
    : spot_(spot), volatility_(volatility), rate_(rate), maturity_(maturity) {
  if (!(std::isfinite(spot) && spot > 0.0)) {
    throw InputError("spot must be positive, got " + std::to_string(spot));
  }
  if (!(std::isfinite(volatility) && volatility > 0.0)) {
    throw InputError("volatility must be positive, got " + std::to_string(volatility));
  }
  if (!std::isfinite(rate)) {
    throw InputError("rate must be finite");
  }
  if (!(std::isfinite(maturity) && maturity > 0.0)) {
    throw InputError("maturity must be positive, got " + std::to_string(maturity));
  }
}

}  // namespace binconv
