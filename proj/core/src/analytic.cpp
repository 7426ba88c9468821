#include "binconv/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "binconv/errors.hpp"
#include "binconv/quadrature.hpp"

namespace binconv {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

BsPoint bs_point(const MarketParams& m, double strike, ZeroStrike zero) {
  if (!(strike > 0.0)) {
    if (zero == ZeroStrike::Limit && strike == 0.0) {
      const double inf = std::numeric_limits<double>::infinity();
      return {inf, inf, m.spot(), m.discount(), m.discount()};
    }
    throw InputError("Black-Scholes point needs a positive strike, got " +
                     std::to_string(strike));
  }
  const double sd = m.total_vol();
  BsPoint p;
  p.d1 = (std::log(m.spot() / strike) +
          (m.rate() + 0.5 * m.volatility() * m.volatility()) * m.maturity()) /
         sd;
  p.d2 = p.d1 - sd;
  const double disc = m.discount();
  p.call = std::max(m.spot() * norm_cdf(p.d1) - strike * disc * norm_cdf(p.d2), 0.0);
  p.digital_weak = disc * norm_cdf(p.d2);
  p.digital_strict = p.digital_weak;
  return p;
}

double bs_call(const MarketParams& m, double strike) { return bs_point(m, strike).call; }

double bs_put(const MarketParams& m, double strike) {
  const BsPoint p = bs_point(m, strike);
  return strike * m.discount() * norm_cdf(-p.d2) - m.spot() * norm_cdf(-p.d1);
}

double bs_digital(const MarketParams& m, double strike) {
  return bs_point(m, strike).digital_weak;
}

StrikeDomain strike_domain(const MarketParams& m, const std::optional<PolyBound>& bound,
                           double rel_tol) {
  const PolyBound b = bound.value_or(PolyBound{0.0, 1.0, 0.0});
  const double s = m.total_vol();
  const double mu = (m.rate() - 0.5 * m.volatility() * m.volatility()) * m.maturity();
  const double at_spot = b.at(m.spot()) + 1.0;
  double z = 8.0;
  for (; z < 60.0; z += 0.5) {
    const double upper = m.spot() * std::exp(mu + s * z);
    const double growth = (b.at(upper) + 1.0) / at_spot * (upper / m.spot());
    if (norm_pdf(z) * (1.0 + z * z * z) * growth <= 1e-3 * rel_tol) {
      break;
    }
  }
  return {m.spot() * std::exp(mu - s * z), m.spot() * std::exp(mu + s * z)};
}

double bs_price_payoff_oracle(const MarketParams& m, const PiecewisePayoff& payoff,
                              double rel_tol) {
  if (!(rel_tol > 1e-14 && rel_tol < 1e-4)) {
    throw InputError("oracle tolerance must lie in (1e-14, 1e-4)");
  }
  if (const auto check = payoff.validate(); !check) {
    throw InputError("payoff " + payoff.name() + " outside admissible class: " +
                     check.diagnostic);
  }
  const PolyBound bound = *payoff.poly_bound();
  const double s0 = m.spot();
  const double s = m.total_vol();
  const double mu = (m.rate() - 0.5 * m.volatility() * m.volatility()) * m.maturity();
  const auto price_at = [&](double z) { return s0 * std::exp(mu + s * z); };

  // E[f(S_T)] = ∫ f(S(z)) φ(z) dz
  const auto integrand = [&](double z) { return payoff(price_at(z)) * norm_pdf(z); };

  // E[S^q 1{S > U}] for the lognormal law, U = S(zu)
  const auto partial_moment = [&](double q, double zu) {
    return std::pow(s0, q) * std::exp(q * mu + 0.5 * q * q * s * s) * norm_cdf(q * s - zu);
  };
  // |f(S)| <= |f(U)| + c1 S + c2 S^{p+1}/(p+1) for S > U
  const auto tail_bound = [&](double zu) {
    const double p = bound.exponent;
    return std::abs(payoff(price_at(zu))) * norm_cdf(-zu) + bound.c1 * partial_moment(1.0, zu) +
           bound.c2 / (p + 1.0) * partial_moment(p + 1.0, zu);
  };

  constexpr double kLowerZ = -14.0;
  std::vector<double> zs;
  for (const auto& bp : payoff.breakpoints()) {
    if (bp.at > 0.0) zs.push_back((std::log(bp.at / s0) - mu) / s);
  }

  const double inner_tol = 0.1 * rel_tol;
  double total = 0.0;
  double err = 0.0;
  double z_prev = kLowerZ;
  for (double zu = 8.0; zu <= 40.0; zu += 2.0) {
    std::vector<double> cuts{z_prev};
    for (double zk : zs) {
      if (zk > z_prev && zk < zu) cuts.push_back(zk);
    }
    cuts.push_back(zu);
    const auto piece = integrate_pieces(integrand, cuts, inner_tol, "lognormal oracle");
    total += piece.value;
    err += piece.error;
    z_prev = zu;
    const double tail = tail_bound(zu);
    if (tail <= 0.01 * rel_tol * std::abs(total) || tail < 1e-300) {
      if (err > rel_tol * std::abs(total) && err > 1e-300) {
        throw NumericalError("lognormal oracle: error estimate above tolerance", err);
      }
      return m.discount() * total;
    }
  }
  throw NumericalError("lognormal oracle: upper tail did not become negligible",
                       tail_bound(z_prev));
}

}  // namespace binconv
