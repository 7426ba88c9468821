#include "binconv/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "binconv/analytic.hpp"
#include "binconv/errors.hpp"
#include "binconv/lattice.hpp"
#include "binconv/quadrature.hpp"

namespace binconv {

double trapezoid(const std::function<double(double)>& g, double b, int n) {
  if (n < 1) throw InputError("trapezoid needs n >= 1");
  const double h = b / n;
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) values[k] = g(k * h);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += values[k] + values[k + 1];
  return 0.5 * h * acc;
}

double centered_digital(const MarketParams& m, int n, double strike) {
  if (strike <= 0.0) return m.discount();
  const LatticeSpec spec = build_lattice(m, n, Scheme::centered(strike));
  return lattice_price_digital(spec, strike, DigitalConvention::Strict);
}

double smooth_constant_density(const MarketParams& m, double strike) {
  const double sigma = m.volatility();
  const double t = m.maturity();
  const double r = m.rate();
  const BsPoint p = bs_point(m, strike);
  const double d1 = p.d1, d2 = p.d2;
  const double scale = m.discount() * std::exp(-0.5 * d2 * d2) * 0.5 * std::numbers::inv_sqrtpi *
                       std::numbers::sqrt2;
  return scale * ((d1 * d1 * d1 + d1 * d2 * d2 + 2.0 * d2 - 4.0 * d1) / 24.0 +
                  (2.0 - d1 * d2 - d1 * d1) * std::sqrt(t) / (6.0 * sigma) * r +
                  t * d1 * r * r / (2.0 * sigma * sigma));
}

double smooth_constant_of(const MarketParams& m, const PiecewisePayoff& payoff) {
  constexpr double kTol = 1e-8;
  const auto dom = strike_domain(m, payoff.poly_bound(), kTol);
  std::vector<double> cuts{dom.lower};
  for (const auto& bp : payoff.breakpoints()) {
    if (bp.at > dom.lower && bp.at < dom.upper) cuts.push_back(bp.at);
  }
  cuts.push_back(dom.upper);
  const auto integrand = [&](double a) {
    const double slope = payoff.slope(a);
    return slope == 0.0 ? 0.0 : slope * smooth_constant_density(m, a);
  };
  return integrate_pieces(integrand, cuts, kTol, "smooth constant").value;
}

SmoothEstimate smooth_estimate(const MarketParams& m, const PiecewisePayoff& payoff, int n,
                               double alpha, const SmoothOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0 / 3.0)) {
    throw InputError("smooth estimator needs alpha in (0, 1/3), got " + std::to_string(alpha));
  }
  if (n < 1) throw InputError("smooth estimator needs n >= 1");
  const bool smooth = payoff.smoothness() == Smoothness::C3Smooth;
  if (!smooth && !options.allow_piecewise) {
    throw InputError("smooth estimator needs a C3 payoff; " + payoff.name() +
                     " is only piecewise smooth");
  }

  SmoothEstimate est;
  est.n = n;
  est.alpha = alpha;
  est.grid_scale = options.grid_scale > 0.0 ? options.grid_scale : m.spot();
  const double span = est.grid_scale * std::pow(static_cast<double>(n), alpha);
  est.spacing = span / n;
  est.grid.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) est.grid[k] = k * est.spacing;

  const auto integrand = [&](double a) {
    const double slope = payoff.slope(a);
    return slope == 0.0 ? 0.0 : slope * centered_digital(m, n, a);
  };

  if (smooth) {
    // f'(a_k) is evaluated once per grid point; the pairwise sum follows
    // the trapezoid definition in a fixed order.
    std::vector<double> g(est.grid.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = integrand(est.grid[k]);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += g[k] + g[k + 1];
    est.value = 0.5 * est.spacing * acc;
  } else {
    est.piecewise = true;
    // one trapezoid per piece, node count proportional to its share of the span
    std::vector<double> edges{0.0};
    for (const auto& bp : payoff.breakpoints()) {
      if (bp.at > 0.0 && bp.at < span) edges.push_back(bp.at);
    }
    edges.push_back(span);
    double acc = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      const double lo = edges[i - 1];
      const double width = edges[i] - lo;
      const int pieces = std::max(1, static_cast<int>(std::lround(n * width / span)));
      const auto& piece = payoff.pieces()[payoff.piece_index(lo + 0.5 * width)];
      acc += trapezoid(
          [&](double x) {
            const double a = lo + x;
            const double slope = piece.slope(a);
            return slope == 0.0 ? 0.0 : slope * centered_digital(m, n, a);
          },
          width, pieces);
    }
    for (const auto& jump : payoff.jumps()) {
      if (jump.minus == 0.0 && jump.plus == 0.0) continue;
      acc += (jump.minus + jump.plus) * centered_digital(m, n, jump.at);
    }
    est.value = acc;
  }
  est.value += payoff.value_at_zero() * m.discount();
  est.predicted_c = smooth_constant_of(m, payoff);
  return est;
}

RichardsonResult richardson(const std::map<int, double>& values, double order) {
  if (!(order > 0.0)) throw InputError("Richardson order must be positive");
  RichardsonResult out;
  const double w = std::pow(2.0, order);
  int last_sign = 0;
  for (const auto& [n, a_n] : values) {
    const auto partner = values.find(2 * n);
    if (partner == values.end()) {
      out.skipped.push_back(n);
      continue;
    }
    const double a_2n = partner->second;
    out.extrapolated[n] = (w * a_2n - a_n) / (w - 1.0);
    const double diff = a_2n - a_n;
    const int sign = (diff > 0.0) - (diff < 0.0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) out.monotone_input = false;
      last_sign = sign;
    }
  }
  return out;
}

}  // namespace binconv
