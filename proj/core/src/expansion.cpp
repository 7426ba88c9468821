#include "binconv/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "binconv/analytic.hpp"
#include "binconv/errors.hpp"
#include "binconv/quadrature.hpp"

namespace binconv {

double frac(double x) {
  const double f = x - std::floor(x);
  // x a hair below an integer can round up to exactly 1
  return f < 1.0 ? f : std::nextafter(1.0, 0.0);
}

namespace {

constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

struct StrikeCoeffs {
  double d1, d2, b, b_tilde, digital_scale, call_scale;
};

/// Everything at strike a that does not involve Δ_n.
StrikeCoeffs strike_coeffs(const MarketParams& m, double lambda, double a) {
  const double sigma = m.volatility();
  const double t = m.maturity();
  const double r = m.rate();
  const double sd = m.total_vol();
  StrikeCoeffs c{};
  c.d1 = (std::log(m.spot() / a) + (r + 0.5 * sigma * sigma) * t) / sd;
  c.d2 = c.d1 - sd;
  const double d1 = c.d1, d2 = c.d2;
  const double q = r - lambda * sigma * sigma;
  c.b = (d1 * d1 * d1 + d1 * d2 * d2 + 2.0 * d2 - 4.0 * d1) / 24.0 +
        (2.0 - d1 * d2 - d1 * d1) * std::sqrt(t) / (6.0 * sigma) * q +
        t * d1 / (2.0 * sigma * sigma) * q * q;
  c.b_tilde = -sigma * sigma * t * (6.0 + d1 * d1 + d2 * d2) + 4.0 * t * (d1 * d1 - d2 * d2) * q -
              12.0 * t * t * q * q;
  c.digital_scale = m.discount() * std::exp(-0.5 * d2 * d2) * kInvSqrt2Pi;
  c.call_scale = m.spot() * std::exp(-0.5 * d1 * d1) / (24.0 * sigma * std::sqrt(2.0 * std::numbers::pi * t));
  return c;
}

double digital_bracket(double scale, double delta, double d2, double b, int n) {
  const double nn = static_cast<double>(n);
  return scale * (delta / std::sqrt(nn) - d2 * delta * delta / (2.0 * nn) + b / nn);
}

double h_value(const MarketParams& m, const StrikeCoeffs& c, double delta) {
  return c.call_scale *
         (c.b_tilde - 12.0 * m.volatility() * m.volatility() * m.maturity() * (delta * delta - 1.0));
}

/// Position of a on the virtual node grid: a = node(t) with t real.
double node_coordinate(const LatticeSpec& spec, double a) {
  return (std::log(a / spec.spot()) - spec.n() * spec.log_down()) /
         (spec.log_up() - spec.log_down());
}

/// Cut points for strike-space integrals: every (virtual) node in the
/// window plus the payoff breakpoints. Δ_n is smooth between cuts.
std::vector<double> expansion_cuts(const MarketParams& m, const LatticeSpec& spec,
                                   const PiecewisePayoff& payoff, double rel_tol) {
  const auto dom = strike_domain(m, payoff.poly_bound(), rel_tol);
  const double lo = dom.lower;
  const double hi = std::min(dom.upper, spec.node(spec.n()));
  std::vector<double> cuts{lo};
  if (!(hi > lo)) return cuts;
  const long j_first = static_cast<long>(std::floor(node_coordinate(spec, lo))) + 1;
  const long j_last = static_cast<long>(std::ceil(node_coordinate(spec, hi))) - 1;
  for (long j = j_first; j <= j_last; ++j) {
    const double x = spec.node(j);
    if (x > lo && x < hi) cuts.push_back(x);
  }
  for (const auto& bp : payoff.breakpoints()) {
    if (bp.at > lo && bp.at < hi) cuts.push_back(bp.at);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  // merge cut points that coincide up to the node tolerance
  std::vector<double> merged;
  for (double x : cuts) {
    if (merged.empty() || x - merged.back() > kNodeRelTol * x) merged.push_back(x);
  }
  return merged;
}

/// Integrates g(a, Δ_n(a)) over the cuts. Within each interval the node
/// index is fixed, so Δ_n = 2(t - j) - 1 with no wrap-around at the ends.
template <class G>
QuadratureResult integrate_with_delta(const LatticeSpec& spec, const std::vector<double>& cuts,
                                      double rel_tol, const char* what, G&& g) {
  QuadratureResult total;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double lo = cuts[i - 1];
    const double hi = cuts[i];
    const double j = std::floor(node_coordinate(spec, std::sqrt(lo * hi)));
    const auto f = [&](double a) {
      const double delta = 2.0 * (node_coordinate(spec, a) - j) - 1.0;
      return g(a, delta);
    };
    const auto piece = integrate(f, lo, hi, rel_tol, 12);
    total.value += piece.value;
    total.error += piece.error;
    total.l1 += piece.l1;
  }
  if (!std::isfinite(total.value)) {
    throw NumericalError(std::string(what) + ": non-finite quadrature value");
  }
  const double scale = std::max(std::abs(total.value), total.l1);
  if (total.error > rel_tol * scale && total.error > 1e-300) {
    throw NumericalError(std::string(what) + ": quadrature did not converge", total.error);
  }
  return total;
}

double jump_contribution(const MarketParams& m, const LatticeSpec& spec,
                         const PiecewisePayoff& payoff) {
  double acc = 0.0;
  for (const auto& jump : payoff.jumps()) {
    if (jump.at <= 0.0 || (jump.minus == 0.0 && jump.plus == 0.0)) {
      continue;  // both digital prices equal e^{-rT} at 0 in every model
    }
    const auto terms = expansion_terms(m, spec, jump.at);
    if (terms.on_node) {
      acc += jump.minus * terms.j_n + jump.plus * terms.j_hat_n;
    } else {
      acc += (jump.minus + jump.plus) * terms.j_n;
    }
  }
  return acc;
}

void require_admissible(const PiecewisePayoff& payoff) {
  if (const auto check = payoff.validate(); !check) {
    throw InputError("payoff " + payoff.name() + " outside admissible class: " +
                     check.diagnostic);
  }
}

}  // namespace

ExpansionTerms expansion_terms(const MarketParams& m, const LatticeSpec& spec, double strike) {
  if (!(strike > 0.0)) throw InputError("expansion terms need a positive strike");
  const auto c = strike_coeffs(m, spec.lambda(), strike);
  ExpansionTerms t;
  t.strike = strike;
  t.n = spec.n();
  t.lambda = spec.lambda();
  t.d1 = c.d1;
  t.d2 = c.d2;
  t.on_node = spec.locate(strike).node.has_value();
  const double x = (std::log(spec.spot() / strike) + spec.n() * spec.log_down()) /
                   (spec.log_up() - spec.log_down());
  t.delta_n = t.on_node ? 1.0 : 1.0 - 2.0 * frac(x);
  t.b_n = c.b;
  t.b_tilde_n = c.b_tilde;
  t.digital_scale = c.digital_scale;
  t.call_scale = c.call_scale;
  t.j_n = digital_bracket(c.digital_scale, t.delta_n, c.d2, c.b, spec.n());
  t.j_hat_n = digital_bracket(c.digital_scale, t.delta_n - 2.0, c.d2, c.b, spec.n());
  t.h_n = h_value(m, c, t.delta_n);
  return t;
}

double predicted_digital_error(const ExpansionTerms& terms, int n, DigitalConvention conv) {
  const double delta = (conv == DigitalConvention::Strict && terms.on_node)
                           ? terms.delta_n - 2.0
                           : terms.delta_n;
  return digital_bracket(terms.digital_scale, delta, terms.d2, terms.b_n, n);
}

double predicted_call_error(const ExpansionTerms& terms, int n) {
  return terms.h_n / static_cast<double>(n);
}

PayoffErrorParts payoff_error_parts(const MarketParams& m, const LatticeSpec& spec,
                                    const PiecewisePayoff& payoff, double rel_tol) {
  require_admissible(payoff);
  const double lambda = spec.lambda();
  const auto cuts = expansion_cuts(m, spec, payoff, rel_tol);

  PayoffErrorParts parts;
  parts.root_n_integral =
      integrate_with_delta(spec, cuts, rel_tol, "1/sqrt(n) error integral",
                           [&](double a, double delta) {
                             const double slope = payoff.slope(a);
                             if (slope == 0.0) return 0.0;
                             return slope * strike_coeffs(m, lambda, a).digital_scale * delta;
                           })
          .value;
  parts.inv_n_integral =
      integrate_with_delta(spec, cuts, rel_tol, "1/n error integral",
                           [&](double a, double delta) {
                             const double slope = payoff.slope(a);
                             if (slope == 0.0) return 0.0;
                             const auto c = strike_coeffs(m, lambda, a);
                             return slope * c.digital_scale * (c.b - 0.5 * c.d2 * delta * delta);
                           })
          .value;
  parts.jump_terms = jump_contribution(m, spec, payoff);
  const double n = spec.n();
  parts.value = parts.root_n_integral / std::sqrt(n) + parts.inv_n_integral / n + parts.jump_terms;
  return parts;
}

PayoffErrorParts payoff_error_parts_c2(const MarketParams& m, const LatticeSpec& spec,
                                       const PiecewisePayoff& payoff, double rel_tol) {
  require_admissible(payoff);
  if (!payoff.has_curvature()) {
    throw InputError("payoff " + payoff.name() + " does not supply a second derivative");
  }
  const double lambda = spec.lambda();
  const auto cuts = expansion_cuts(m, spec, payoff, rel_tol);
  const double n = spec.n();

  PayoffErrorParts parts;
  parts.inv_n_integral =
      integrate_with_delta(spec, cuts, rel_tol, "second-derivative error integral",
                           [&](double a, double delta) {
                             const double curv = payoff.curvature(a);
                             if (curv == 0.0) return 0.0;
                             return curv * h_value(m, strike_coeffs(m, lambda, a), delta);
                           })
          .value;
  parts.jump_terms = jump_contribution(m, spec, payoff);
  // H_n vanishes at a = 0, so only positive breakpoints carry a kink term
  for (const auto& bp : payoff.breakpoints()) {
    const double kink = bp.right_slope - bp.left_slope;
    if (bp.at > 0.0 && kink != 0.0) {
      parts.kink_terms += kink * expansion_terms(m, spec, bp.at).h_n / n;
    }
  }
  parts.value = parts.inv_n_integral / n + parts.jump_terms + parts.kink_terms;
  return parts;
}

double predicted_payoff_error(const MarketParams& m, const LatticeSpec& spec,
                              const PiecewisePayoff& payoff) {
  return payoff_error_parts(m, spec, payoff).value;
}

double predicted_payoff_error_c2(const MarketParams& m, const LatticeSpec& spec,
                                 const PiecewisePayoff& payoff) {
  return payoff_error_parts_c2(m, spec, payoff).value;
}

double diener_crr_call_error(const MarketParams& m, int n, double strike) {
  if (std::abs(m.spot() - 1.0) > 1e-15 || std::abs(m.maturity() - 1.0) > 1e-15) {
    throw InputError("Diener-Diener formula requires S0 = 1 and T = 1");
  }
  if (n < 1) throw InputError("Diener-Diener formula requires n >= 1");
  if (!(strike > 0.0)) throw InputError("Diener-Diener formula requires a positive strike");
  const double sigma = m.volatility();
  const double r = m.rate();
  const double log_u = sigma / std::sqrt(static_cast<double>(n));
  const double log_d = -log_u;
  const double x = (std::log(1.0 / strike) + n * log_d) / (log_u - log_d);
  const bool on_node = std::abs(x - std::round(x)) * (log_u - log_d) <= kNodeRelTol;
  const double delta = on_node ? 1.0 : 1.0 - 2.0 * frac(x);
  const double d1 = (std::log(1.0 / strike) + r + 0.5 * sigma * sigma) / sigma;
  const double d2 = d1 - sigma;
  const double a = -sigma * sigma * (6.0 + d1 * d1 + d2 * d2) + 4.0 * (d1 * d1 - d2 * d2) * r -
                   12.0 * r * r;
  return std::exp(-0.5 * d1 * d1) / (24.0 * sigma * std::sqrt(2.0 * std::numbers::pi)) *
         (a - 12.0 * sigma * sigma * (delta * delta - 1.0)) / n;
}

}  // namespace binconv
