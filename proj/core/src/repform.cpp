#include "binconv/repform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "binconv/analytic.hpp"
#include "binconv/errors.hpp"
#include "binconv/quadrature.hpp"

namespace binconv {

DigitalCurve DigitalCurve::black_scholes(const MarketParams& m) {
  DigitalCurve c;
  c.source_ = CurveSource::BlackScholes;
  c.discount_ = m.discount();
  c.market_ = std::make_shared<const MarketParams>(m);
  return c;
}

DigitalCurve DigitalCurve::lattice(std::shared_ptr<const LatticeSpec> spec) {
  if (!spec) throw InputError("lattice curve needs a lattice");
  DigitalCurve c;
  c.source_ = CurveSource::Lattice;
  c.discount_ = spec->discount();
  const auto prices = spec->terminal_prices();
  const auto& probs = spec->distribution().probs;
  c.suffix_mass_price_.assign(prices.size() + 1, 0.0);
  for (std::size_t j = prices.size(); j-- > 0;) {
    c.suffix_mass_price_[j] = c.suffix_mass_price_[j + 1] + probs[j] * prices[j];
  }
  c.lattice_ = std::move(spec);
  return c;
}

DigitalCurve DigitalCurve::lattice(const LatticeSpec& spec) {
  return lattice(std::make_shared<const LatticeSpec>(spec));
}

DigitalCurve DigitalCurve::tabulated(std::vector<CurvePoint> points, double discount) {
  if (points.empty()) throw InputError("tabulated curve needs at least one point");
  if (!(discount > 0.0)) throw InputError("tabulated curve needs a positive discount");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const std::string where = "point " + std::to_string(i + 1);
    if (!std::isfinite(p.strike) || !std::isfinite(p.price) || p.strike < 0.0 || p.price < 0.0) {
      throw InputError(where + ": strike and price must be finite and non-negative");
    }
    if (i > 0 && !(p.strike > points[i - 1].strike)) {
      throw InputError(where + ": strikes must be strictly increasing");
    }
    if (i > 0 && p.price > points[i - 1].price) {
      throw InputError(where + ": prices must be non-increasing");
    }
    if (p.price > discount * (1.0 + 1e-12)) {
      throw InputError(where + ": price exceeds the discount factor");
    }
  }
  DigitalCurve c;
  c.source_ = CurveSource::Tabulated;
  c.discount_ = discount;
  c.points_ = std::move(points);
  return c;
}

DigitalCurve DigitalCurve::read_csv(std::istream& in, double discount) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("curve CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "strike,price") {
    throw InputError("curve CSV line 1: header must be exactly 'strike,price'");
  }
  std::vector<CurvePoint> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "curve CSV line " + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError(where + ": expected two columns");
    }
    const auto parse = [&](const std::string& field) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
        throw InputError(where + ": bad number '" + field + "'");
      }
      return v;
    };
    CurvePoint p{parse(line.substr(0, comma)), parse(line.substr(comma + 1))};
    if (p.strike < 0.0 || p.price < 0.0) {
      throw InputError(where + ": strike and price must be non-negative");
    }
    if (!points.empty() && !(p.strike > points.back().strike)) {
      throw InputError(where + ": strikes must be strictly increasing");
    }
    if (!points.empty() && p.price > points.back().price) {
      throw InputError(where + ": prices must be non-increasing");
    }
    if (p.price > discount * (1.0 + 1e-12)) {
      throw InputError(where + ": price exceeds the discount factor");
    }
    points.push_back(p);
  }
  return tabulated(std::move(points), discount);
}

DigitalCurve DigitalCurve::read_csv_file(const std::string& path, double discount) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open curve file '" + path + "'");
  return read_csv(in, discount);
}

double DigitalCurve::strict(double a) const {
  if (a < 0.0) return discount_;
  switch (source_) {
    case CurveSource::BlackScholes:
      return a == 0.0 ? discount_ : bs_digital(*market_, a);
    case CurveSource::Lattice: {
      if (a == 0.0) return discount_;
      const auto loc = lattice_->locate(a);
      return discount_ * lattice_->distribution().survival[loc.first_above];
    }
    case CurveSource::Tabulated: {
      const auto& pts = points_;
      if (a >= pts.back().strike) return 0.0;
      const auto it = std::upper_bound(pts.begin(), pts.end(), a,
                                       [](double x, const CurvePoint& p) { return x < p.strike; });
      const double x0 = it == pts.begin() ? 0.0 : std::prev(it)->strike;
      const double y0 = it == pts.begin() ? discount_ : std::prev(it)->price;
      const double w = (a - x0) / (it->strike - x0);
      return y0 + w * (it->price - y0);
    }
  }
  return 0.0;
}

double DigitalCurve::weak(double a) const {
  switch (source_) {
    case CurveSource::BlackScholes: return strict(a);
    case CurveSource::Lattice: {
      if (a <= 0.0) return discount_;
      const auto loc = lattice_->locate(a);
      const auto& dist = lattice_->distribution();
      return discount_ * (loc.node ? dist.survival[*loc.node] : dist.survival[loc.first_above]);
    }
    case CurveSource::Tabulated:
      if (a == points_.back().strike) return points_.back().price;
      return strict(a);
  }
  return 0.0;
}

bool DigitalCurve::has_atom(double a) const { return weak(a) > strict(a); }

double DigitalCurve::support_end() const {
  switch (source_) {
    case CurveSource::BlackScholes: return std::numeric_limits<double>::infinity();
    case CurveSource::Lattice: return lattice_->terminal_prices().back();
    case CurveSource::Tabulated: return points_.back().strike;
  }
  return 0.0;
}

double DigitalCurve::call(double a) const {
  if (a < 0.0) throw InputError("call strike must be non-negative");
  switch (source_) {
    case CurveSource::BlackScholes:
      return bs_point(*market_, a, ZeroStrike::Limit).call;
    case CurveSource::Lattice: {
      const auto loc = lattice_->locate(a);
      const auto j = loc.first_above;
      const double mass = lattice_->distribution().survival[j];
      return discount_ * std::max(suffix_mass_price_[j] - a * mass, 0.0);
    }
    case CurveSource::Tabulated: {
      // exact integral of the piecewise-linear survival curve
      double acc = 0.0;
      double x0 = 0.0;
      double y0 = discount_;
      for (const auto& p : points_) {
        const double lo = std::max(a, x0);
        if (p.strike > lo) {
          const double ylo = y0 + (lo - x0) / (p.strike - x0) * (p.price - y0);
          acc += 0.5 * (ylo + p.price) * (p.strike - lo);
        }
        x0 = p.strike;
        y0 = p.price;
      }
      return acc;
    }
  }
  return 0.0;
}

namespace {

void require_admissible(const PiecewisePayoff& payoff) {
  if (const auto check = payoff.validate(); !check) {
    throw InputError("payoff " + payoff.name() + " outside admissible class: " +
                     check.diagnostic);
  }
}

/// Σ Δ₋f(s_k) weak(s_k) + Σ Δ₊f(s_k) strict(s_k), after checking that the
/// payoff and the curve do not jump at the same strike.
double jump_terms(const DigitalCurve& curve, const PiecewisePayoff& payoff) {
  double acc = 0.0;
  for (const auto& jump : payoff.jumps()) {
    if (jump.minus == 0.0 && jump.plus == 0.0) continue;
    if (curve.source() == CurveSource::Tabulated && jump.at > 0.0 && curve.has_atom(jump.at)) {
      std::ostringstream os;
      os.precision(17);
      os << "payoff " << payoff.name() << " and the digital curve both jump at strike "
         << jump.at;
      throw InputError(os.str());
    }
    acc += jump.minus * curve.weak(jump.at) + jump.plus * curve.strict(jump.at);
  }
  return acc;
}

/// Cut points for quadrature over [0, upper].
std::vector<double> curve_cuts(const DigitalCurve& curve, const PiecewisePayoff& payoff,
                               double tol) {
  double upper = curve.support_end();
  std::vector<double> cuts{0.0};
  if (curve.source() == CurveSource::BlackScholes) {
    const auto& m = *curve.market();
    upper = strike_domain(m, payoff.poly_bound(), tol).upper;
    // a few interior anchors around the forward help the adaptive rule
    const double mu = (m.rate() - 0.5 * m.volatility() * m.volatility()) * m.maturity();
    for (int k = -4; k <= 4; ++k) {
      cuts.push_back(m.spot() * std::exp(mu + k * m.total_vol()));
    }
  } else if (curve.source() == CurveSource::Tabulated) {
    for (const auto& p : curve.points()) cuts.push_back(p.strike);
  } else {
    const auto prices = curve.lattice_spec()->terminal_prices();
    cuts.insert(cuts.end(), prices.begin(), prices.end());
  }
  for (const auto& bp : payoff.breakpoints()) cuts.push_back(bp.at);
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (double x : cuts) {
    if (x > upper) break;
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  return out;
}

/// ∫_0^∞ f'(a) strict(a) da for a lattice curve. strict is constant
/// between adjacent terminal prices, so every interval contributes its
/// level times the change of f across it (jumps excluded).
double lattice_slope_integral(const DigitalCurve& curve, const PiecewisePayoff& payoff) {
  const LatticeSpec& spec = *curve.lattice_spec();
  const auto prices = spec.terminal_prices();
  std::vector<double> cuts{0.0};
  for (double s : prices) cuts.push_back(s);
  for (const auto& bp : payoff.breakpoints()) {
    const auto loc = spec.locate(bp.at);
    if (loc.node) {
      // a breakpoint on a node replaces the node
      cuts[*loc.node + 1] = bp.at;
    } else if (bp.at < prices.back()) {
      cuts.push_back(bp.at);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  const auto& survival = spec.distribution().survival;
  const auto pieces = payoff.pieces();
  double acc = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double lo = cuts[i - 1];
    const double hi = cuts[i];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const double level = survival[spec.locate(mid).first_above];
    if (level == 0.0) continue;
    const auto& piece = pieces[payoff.piece_index(mid)];
    acc += level * (piece.value(hi) - piece.value(lo));
  }
  return spec.discount() * acc;
}

}  // namespace

double price_via_digitals(const DigitalCurve& curve, const PiecewisePayoff& payoff, double tol) {
  require_admissible(payoff);
  double price = payoff.value_at_zero() * curve.discount() + jump_terms(curve, payoff);
  if (curve.source() == CurveSource::Lattice) {
    return price + lattice_slope_integral(curve, payoff);
  }
  const auto cuts = curve_cuts(curve, payoff, tol);
  const auto integrand = [&](double a) {
    const double slope = payoff.slope(a);
    return slope == 0.0 ? 0.0 : slope * curve.strict(a);
  };
  return price + integrate_pieces(integrand, cuts, tol, "digital representation").value;
}

double price_via_calls(const DigitalCurve& curve, const PiecewisePayoff& payoff, double tol) {
  require_admissible(payoff);
  if (!payoff.has_curvature()) {
    throw InputError("payoff " + payoff.name() + " does not supply a second derivative");
  }
  double price = payoff.value_at_zero() * curve.discount() + jump_terms(curve, payoff);

  // kinks, including f'(0+) - f'(0-) = f'(0+) at the origin
  const auto bps = payoff.breakpoints();
  if (bps.empty() || bps.front().at > 0.0) {
    price += payoff.right_slope_at_zero() * curve.call(0.0);
  }
  for (const auto& bp : bps) {
    const double kink = bp.right_slope - bp.left_slope;
    if (kink != 0.0) price += kink * curve.call(bp.at);
  }

  const auto cuts = curve_cuts(curve, payoff, tol);
  const auto integrand = [&](double a) {
    const double curv = payoff.curvature(a);
    return curv == 0.0 ? 0.0 : curv * curve.call(a);
  };
  return price + integrate_pieces(integrand, cuts, tol, "call representation").value;
}

}  // namespace binconv
