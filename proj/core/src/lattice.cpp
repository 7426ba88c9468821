#include "binconv/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "binconv/errors.hpp"

namespace binconv {

namespace {

double parse_scheme_number(std::string_view text, std::string_view id) {
  std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw InputError("bad number in scheme id '" + std::string(id) + "'");
  }
  return v;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Scheme Scheme::parse(std::string_view id) {
  if (id == "crr") return crr();
  if (id == "jr" || id == "jarrow_rudd") return jarrow_rudd();
  if (id == "tian") return tian();
  const auto colon = id.find(':');
  if (colon != std::string_view::npos) {
    const auto kind = id.substr(0, colon);
    const double v = parse_scheme_number(id.substr(colon + 1), id);
    if (kind == "custom") return custom(v);
    if (kind == "centered") return centered(v);
    if (kind == "node") return node_aligned(v);
  }
  throw InputError("unknown scheme '" + std::string(id) +
                   "' (expected crr, jr, tian, custom:L, centered:K, node:K)");
}

std::string Scheme::id() const {
  switch (kind) {
    case SchemeKind::Crr: return "crr";
    case SchemeKind::JarrowRudd: return "jr";
    case SchemeKind::Tian: return "tian";
    case SchemeKind::Custom: return "custom:" + format_double(param);
    case SchemeKind::Centered: return "centered:" + format_double(param);
    case SchemeKind::NodeAligned: return "node:" + format_double(param);
  }
  return "?";
}

double LatticeSpec::node(long j) const {
  return spot_ * std::exp(static_cast<double>(j) * log_up_ +
                          static_cast<double>(n_ - j) * log_down_);
}

StrikeLocation LatticeSpec::locate(double strike) const {
  StrikeLocation loc;
  const auto it = std::lower_bound(prices_.begin(), prices_.end(), strike);
  const auto idx = static_cast<std::size_t>(it - prices_.begin());
  const double tol = kNodeRelTol * strike;
  if (idx < prices_.size() && std::abs(prices_[idx] - strike) <= tol) {
    loc.node = idx;
  } else if (idx > 0 && std::abs(prices_[idx - 1] - strike) <= tol) {
    loc.node = idx - 1;
  }
  loc.first_above = loc.node ? *loc.node + 1 : idx;
  return loc;
}

double lambda_centered(double strike, const MarketParams& m, int n) {
  if (!(strike > 0.0)) throw InputError("centred lattice needs a positive strike");
  if (n < 1) throw InputError("lattice needs n >= 1");
  const double dt = m.maturity() / n;
  const double step = m.volatility() * std::sqrt(dt);
  const double log_moneyness = std::log(strike / m.spot());
  double gamma = (log_moneyness + n * step) / (2.0 * step);
  // an integral γ̃ must give j0 = γ̃, not γ̃ + 1 after rounding noise
  if (const double nearest = std::round(gamma); std::abs(gamma - nearest) <= 1e-9 * std::max(1.0, std::abs(gamma))) {
    gamma = nearest;
  }
  // j0 is allowed outside 0..n: the strike then sits between two virtual
  // nodes beyond the lattice and |λ| stays bounded.
  const double j0 = std::ceil(gamma);
  const double lambda = (log_moneyness - (2.0 * j0 - 1.0 - n) * step) /
                        (n * m.volatility() * m.volatility() * dt);
  const double bound = 1.0 / (m.volatility() * std::sqrt(m.maturity() * n));
  if (std::abs(lambda) > bound * (1.0 + 1e-9)) {
    throw NumericalError("centred lambda exceeds 1/(sigma sqrt(Tn))", std::abs(lambda) - bound);
  }
  return lambda;
}

double lambda_on_node(double strike, const MarketParams& m, int n) {
  if (!(strike > 0.0)) throw InputError("node-aligned lattice needs a positive strike");
  if (n < 1) throw InputError("lattice needs n >= 1");
  const double dt = m.maturity() / n;
  const double step = m.volatility() * std::sqrt(dt);
  const double log_moneyness = std::log(strike / m.spot());
  const double j = std::round((log_moneyness + n * step) / (2.0 * step));
  return (log_moneyness - (2.0 * j - n) * step) / (n * m.volatility() * m.volatility() * dt);
}

double lambda_tian(const MarketParams& m, int n) {
  // Tian's u, d match the first three moments of the one-step lognormal
  // ratio: with v = e^{σ²Δt},
  //   u, d = e^{rΔt} v/2 · (v + 1 ± √(v² + 2v - 3)).
  // The generalized class fixes log(u/d) = 2σ√Δt, so only the geometric
  // centre log(ud)/2 carries over; it equals λσ²Δt.
  const double dt = m.maturity() / n;
  const double sigma2 = m.volatility() * m.volatility();
  const double v = std::exp(sigma2 * dt);
  const double root = std::sqrt(v * v + 2.0 * v - 3.0);
  const double growth = std::exp(m.rate() * dt);
  const double u = 0.5 * growth * v * (v + 1.0 + root);
  const double d = 0.5 * growth * v * (v + 1.0 - root);
  return (std::log(u) + std::log(d)) / (2.0 * sigma2 * dt);
}

TerminalDistribution terminal_pmf(int n, double p) {
  if (n < 0 || !(p > 0.0 && p < 1.0)) {
    throw InputError("terminal pmf needs n >= 0 and p in (0,1)");
  }
  const auto size = static_cast<std::size_t>(n) + 1;
  TerminalDistribution dist;
  dist.probs.assign(size, 0.0);
  dist.log_probs.assign(size, 0.0);

  const double odds = p / (1.0 - p);
  const double log_odds = std::log(p) - std::log1p(-p);
  const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * p)), 0, n);

  // Unnormalised: 1 at the mode, ratios outward. Values only shrink away
  // from the mode, so the recursion cannot overflow; normalising afterwards
  // makes the seed's value irrelevant.
  dist.probs[mode] = 1.0;
  for (int j = mode; j < n; ++j) {
    const double ratio = static_cast<double>(n - j) / (j + 1);
    dist.probs[j + 1] = dist.probs[j] * ratio * odds;
    dist.log_probs[j + 1] = dist.log_probs[j] + std::log(ratio) + log_odds;
  }
  for (int j = mode; j > 0; --j) {
    const double ratio = static_cast<double>(j) / (n - j + 1);
    dist.probs[j - 1] = dist.probs[j] * ratio / odds;
    dist.log_probs[j - 1] = dist.log_probs[j] + std::log(ratio) - log_odds;
  }

  double total = 0.0;
  for (double q : dist.probs) total += q;
  const double log_total = std::log(total);
  for (std::size_t j = 0; j < size; ++j) {
    dist.probs[j] /= total;
    dist.log_probs[j] -= log_total;
  }

  dist.survival.assign(size + 1, 0.0);
  for (std::size_t j = size; j-- > 0;) {
    dist.survival[j] = dist.survival[j + 1] + dist.probs[j];
  }
  return dist;
}

LatticeSpec build_lattice(const MarketParams& m, int n, const Scheme& scheme) {
  if (n < 1) throw InputError("lattice needs n >= 1, got " + std::to_string(n));

  double lambda = 0.0;
  switch (scheme.kind) {
    case SchemeKind::Crr: lambda = 0.0; break;
    case SchemeKind::JarrowRudd:
      lambda = m.rate() / (m.volatility() * m.volatility()) - 0.5;
      break;
    case SchemeKind::Tian: lambda = lambda_tian(m, n); break;
    case SchemeKind::Custom: lambda = scheme.param; break;
    case SchemeKind::Centered: lambda = lambda_centered(scheme.param, m, n); break;
    case SchemeKind::NodeAligned: lambda = lambda_on_node(scheme.param, m, n); break;
  }
  if (!std::isfinite(lambda)) throw InputError("lambda must be finite");

  LatticeSpec spec;
  spec.n_ = n;
  spec.lambda_ = lambda;
  spec.dt_ = m.maturity() / n;
  const double step = m.volatility() * std::sqrt(spec.dt_);
  const double tilt = lambda * m.volatility() * m.volatility() * spec.dt_;
  spec.log_up_ = step + tilt;
  spec.log_down_ = -step + tilt;
  const double growth = m.rate() * spec.dt_;
  if (!(spec.log_down_ < growth && growth < spec.log_up_)) {
    std::ostringstream os;
    os << "no-arbitrage band d < e^{r dt} < u violated for lambda=" << lambda << ", n=" << n;
    throw InputError(os.str());
  }
  spec.up_ = std::exp(spec.log_up_);
  spec.down_ = std::exp(spec.log_down_);
  // (e^{rΔt} - d)/(u - d) with both differences formed by expm1
  spec.p_ = (std::expm1(growth) - std::expm1(spec.log_down_)) /
            (std::expm1(spec.log_up_) - std::expm1(spec.log_down_));
  spec.spot_ = m.spot();
  spec.discount_ = m.discount();

  spec.prices_.resize(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) spec.prices_[j] = spec.node(j);
  spec.dist_ = terminal_pmf(n, spec.p_);
  return spec;
}

double lattice_price_digital(const LatticeSpec& spec, double strike, DigitalConvention conv) {
  if (!(strike > 0.0)) throw InputError("digital strike must be positive");
  const auto loc = spec.locate(strike);
  const auto& dist = spec.distribution();
  double mass = dist.survival[loc.first_above];
  if (conv == DigitalConvention::Weak && loc.node) {
    mass += dist.probs[*loc.node];
  }
  return spec.discount() * mass;
}

double lattice_price_payoff(const LatticeSpec& spec, const PiecewisePayoff& payoff) {
  const auto prices = spec.terminal_prices();
  const auto& probs = spec.distribution().probs;
  double acc = 0.0;
  for (std::size_t j = 0; j < prices.size(); ++j) {
    acc += probs[j] * payoff.eval_snapped(prices[j], kNodeRelTol);
  }
  return spec.discount() * acc;
}

double lattice_price_call(const LatticeSpec& spec, double strike) {
  const auto prices = spec.terminal_prices();
  const auto& probs = spec.distribution().probs;
  double acc = 0.0;
  for (std::size_t j = 0; j < prices.size(); ++j) {
    if (prices[j] > strike) acc += probs[j] * (prices[j] - strike);
  }
  return spec.discount() * acc;
}

}  // namespace binconv
