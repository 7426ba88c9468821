#include "binconv/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "binconv/errors.hpp"

namespace binconv {

double PolyBound::at(double a) const { return c1 + c2 * std::pow(a, exponent); }

PiecewisePayoff::PiecewisePayoff(std::string name, std::vector<double> breakpoints,
                                 std::vector<double> breakpoint_values,
                                 std::vector<Piece> pieces, Smoothness smoothness,
                                 std::optional<PolyBound> bound)
    : name_(std::move(name)),
      pieces_(std::move(pieces)),
      smoothness_(smoothness),
      bound_(bound) {
  if (breakpoints.size() != breakpoint_values.size()) {
    throw InputError(name_ + ": one value per breakpoint required");
  }
  if (pieces_.size() != breakpoints.size() + 1) {
    throw InputError(name_ + ": expected " + std::to_string(breakpoints.size() + 1) +
                     " pieces, got " + std::to_string(pieces_.size()));
  }
  for (const auto& piece : pieces_) {
    if (!piece.value || !piece.slope) {
      throw InputError(name_ + ": every piece needs a value and a slope");
    }
  }
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    const double s = breakpoints[k];
    if (!std::isfinite(s) || s < 0.0) {
      throw InputError(name_ + ": breakpoints must be finite and non-negative");
    }
    if (k > 0 && !(s > breakpoints[k - 1])) {
      throw InputError(name_ + ": breakpoints must be strictly increasing");
    }
  }

  zero_is_breakpoint_ = !breakpoints.empty() && breakpoints.front() == 0.0;
  breakpoints_.reserve(breakpoints.size());
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    const double s = breakpoints[k];
    Breakpoint bp;
    bp.at = s;
    bp.value = breakpoint_values[k];
    bp.right = pieces_[k + 1].value(s);
    bp.right_slope = pieces_[k + 1].slope(s);
    if (s == 0.0) {
      // f(0-) = f'(0-) = 0
      bp.left = 0.0;
      bp.left_slope = 0.0;
    } else {
      bp.left = pieces_[k].value(s);
      bp.left_slope = pieces_[k].slope(s);
    }
    breakpoints_.push_back(bp);
  }
  value_at_zero_ = zero_is_breakpoint_ ? breakpoints_.front().value : pieces_.front().value(0.0);
}

std::size_t PiecewisePayoff::piece_index(double a) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a,
                             [](double x, const Breakpoint& b) { return x < b.at; });
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

double PiecewisePayoff::operator()(double a) const {
  if (!(a >= 0.0)) {
    throw InputError(name_ + ": payoff evaluated at negative or NaN argument");
  }
  const std::size_t idx = piece_index(a);
  if (idx > 0 && breakpoints_[idx - 1].at == a) {
    return breakpoints_[idx - 1].value;
  }
  return pieces_[idx].value(a);
}

double PiecewisePayoff::eval_snapped(double a, double rel_tol) const {
  for (const auto& bp : breakpoints_) {
    if (std::abs(a - bp.at) <= rel_tol * bp.at) {
      return bp.value;
    }
  }
  return (*this)(a);
}

double PiecewisePayoff::slope(double a) const { return pieces_[piece_index(a)].slope(a); }

bool PiecewisePayoff::has_curvature() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return static_cast<bool>(p.curvature); });
}

double PiecewisePayoff::curvature(double a) const {
  const auto& piece = pieces_[piece_index(a)];
  if (!piece.curvature) {
    throw InputError(name_ + ": second derivative not supplied");
  }
  return piece.curvature(a);
}

double PiecewisePayoff::right_limit_at_zero() const {
  return zero_is_breakpoint_ ? breakpoints_.front().right : value_at_zero_;
}

double PiecewisePayoff::right_slope_at_zero() const {
  return zero_is_breakpoint_ ? breakpoints_.front().right_slope : pieces_.front().slope(0.0);
}

std::vector<Jump> PiecewisePayoff::jumps() const {
  std::vector<Jump> out;
  out.reserve(breakpoints_.size() + 1);
  for (const auto& bp : breakpoints_) {
    if (bp.at == 0.0) {
      out.push_back({0.0, 0.0, bp.right - bp.value});
    } else {
      out.push_back({bp.at, bp.value - bp.left, bp.right - bp.value});
    }
  }
  return out;
}

PiValidation PiecewisePayoff::validate() const {
  for (const auto& j : jumps()) {
    if (!std::isfinite(j.minus) || !std::isfinite(j.plus)) {
      std::ostringstream os;
      os << "jump at s=" << j.at << " is not finite";
      return {false, os.str()};
    }
  }
  if (!bound_) {
    return {false, "no polynomial bound certificate for |f'|"};
  }
  if (!(bound_->exponent >= 0.0 && bound_->c1 >= 0.0 && bound_->c2 >= 0.0)) {
    return {false, "polynomial bound coefficients must be non-negative"};
  }
  // 100 points per decade on [1e-6, 1e6]
  constexpr int kPoints = 1201;
  for (int i = 0; i < kPoints; ++i) {
    const double a = std::pow(10.0, -6.0 + 12.0 * i / (kPoints - 1));
    const double df = std::abs(slope(a));
    const double bound = bound_->at(a);
    if (!std::isfinite(df) || df > bound * (1.0 + 1e-9) + 1e-12) {
      std::ostringstream os;
      os.precision(6);
      os << "polynomial bound violated at a=" << a << ": |f'|=" << df << " > " << bound;
      return {false, os.str()};
    }
  }
  return {true, {}};
}

namespace payoffs {
namespace {

Piece zero_piece() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

Piece constant_piece(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

/// slope·x + intercept
Piece affine_piece(double slope, double intercept) {
  return {[=](double x) { return slope * x + intercept; }, [=](double) { return slope; },
          [](double) { return 0.0; }};
}

void require_strike(double k, const char* what) {
  if (!(std::isfinite(k) && k > 0.0)) {
    throw InputError(std::string(what) + ": strike must be positive");
  }
}

std::string fmt_strike(double k) {
  std::ostringstream os;
  os.precision(17);
  os << k;
  return os.str();
}

}  // namespace

PiecewisePayoff call(double strike) {
  require_strike(strike, "call");
  return PiecewisePayoff("call:" + fmt_strike(strike), {strike}, {0.0},
                         {zero_piece(), affine_piece(1.0, -strike)},
                         Smoothness::C1PiecewiseAbsContDeriv, PolyBound{0.0, 1.0, 0.0});
}

PiecewisePayoff put(double strike) {
  require_strike(strike, "put");
  return PiecewisePayoff("put:" + fmt_strike(strike), {strike}, {0.0},
                         {affine_piece(-1.0, strike), zero_piece()},
                         Smoothness::C1PiecewiseAbsContDeriv, PolyBound{0.0, 1.0, 0.0});
}

PiecewisePayoff digital_geq(double strike) {
  require_strike(strike, "digital_geq");
  return PiecewisePayoff("digital_geq:" + fmt_strike(strike), {strike}, {1.0},
                         {zero_piece(), constant_piece(1.0)}, Smoothness::C0PiecewiseC1,
                         PolyBound{0.0, 0.0, 0.0});
}

PiecewisePayoff digital_gt(double strike) {
  require_strike(strike, "digital_gt");
  return PiecewisePayoff("digital_gt:" + fmt_strike(strike), {strike}, {0.0},
                         {zero_piece(), constant_piece(1.0)}, Smoothness::C0PiecewiseC1,
                         PolyBound{0.0, 0.0, 0.0});
}

PiecewisePayoff straddle(double strike) {
  require_strike(strike, "straddle");
  return PiecewisePayoff("straddle:" + fmt_strike(strike), {strike}, {0.0},
                         {affine_piece(-1.0, strike), affine_piece(1.0, -strike)},
                         Smoothness::C1PiecewiseAbsContDeriv, PolyBound{0.0, 1.0, 0.0});
}

PiecewisePayoff power_call4(double strike) {
  require_strike(strike, "powercall4");
  const double k = strike;
  Piece above{[k](double x) { return std::pow(x - k, 4); },
              [k](double x) { return 4.0 * std::pow(x - k, 3); },
              [k](double x) { return 12.0 * (x - k) * (x - k); }};
  // |f'| = 4((a-K)^+)^3 <= 4a^3
  return PiecewisePayoff("powercall4:" + fmt_strike(strike), {strike}, {0.0},
                         {zero_piece(), std::move(above)}, Smoothness::C3Smooth,
                         PolyBound{3.0, 0.0, 4.0});
}

PiecewisePayoff butterfly(double k1, double k2, double k3) {
  require_strike(k1, "butterfly");
  if (!(k1 < k2 && k2 < k3)) {
    throw InputError("butterfly: strikes must satisfy K1 < K2 < K3");
  }
  // (x-K1)^+ - 2(x-K2)^+ + (x-K3)^+
  return PiecewisePayoff(
      "butterfly:" + fmt_strike(k1) + "," + fmt_strike(k2) + "," + fmt_strike(k3),
      {k1, k2, k3}, {0.0, k2 - k1, 2.0 * k2 - k1 - k3},
      {zero_piece(), affine_piece(1.0, -k1), affine_piece(-1.0, 2.0 * k2 - k1),
       constant_piece(2.0 * k2 - k1 - k3)},
      Smoothness::C1PiecewiseAbsContDeriv, PolyBound{0.0, 1.0, 0.0});
}

PiecewisePayoff constant(double c) {
  return PiecewisePayoff("constant:" + fmt_strike(c), {}, {}, {constant_piece(c)},
                         Smoothness::C3Smooth, PolyBound{0.0, 0.0, 0.0});
}

PiecewisePayoff identity() {
  return PiecewisePayoff("identity", {}, {}, {affine_piece(1.0, 0.0)}, Smoothness::C3Smooth,
                         PolyBound{0.0, 1.0, 0.0});
}

namespace {

double parse_number(std::string_view text, std::string_view id) {
  std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw InputError("bad number '" + buf + "' in payoff id '" + std::string(id) + "'");
  }
  return v;
}

}  // namespace

PiecewisePayoff from_id(std::string_view id) {
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("payoff id '" + std::string(id) + "' must look like name:strike");
  }
  const std::string_view kind = id.substr(0, colon);
  const std::string_view args = id.substr(colon + 1);

  if (kind == "butterfly") {
    std::vector<double> ks;
    std::size_t start = 0;
    while (start <= args.size()) {
      const auto comma = args.find(',', start);
      const auto len = (comma == std::string_view::npos ? args.size() : comma) - start;
      ks.push_back(parse_number(args.substr(start, len), id));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (ks.size() != 3) {
      throw InputError("butterfly needs three strikes: butterfly:K1,K2,K3");
    }
    return butterfly(ks[0], ks[1], ks[2]);
  }

  const double k = parse_number(args, id);
  if (kind == "call") return call(k);
  if (kind == "put") return put(k);
  if (kind == "digital_geq") return digital_geq(k);
  if (kind == "digital_gt") return digital_gt(k);
  if (kind == "straddle") return straddle(k);
  if (kind == "powercall4") return power_call4(k);
  throw InputError("unknown payoff kind '" + std::string(kind) + "'");
}

}  // namespace payoffs
}  // namespace binconv
