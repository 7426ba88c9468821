#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "binconv/lattice.hpp"
#include "binconv/market.hpp"
#include "binconv/payoff.hpp"

namespace binconv {

enum class CurveSource { BlackScholes, Lattice, Tabulated };

struct CurvePoint {
  double strike = 0.0;
  double price = 0.0;
};

/// Digital prices as a function of strike, in both conventions, from one
/// of three sources. Non-increasing in strike, equal to the discount factor
/// at 0+ and vanishing at infinity.
///
/// A tabulated curve interpolates linearly between listed strikes and from
/// (0, discount) to the first one. Past the last strike it is zero, so the
/// last listed price is an atom there; no other strike carries an atom.
class DigitalCurve {
 public:
  static DigitalCurve black_scholes(const MarketParams& m);
  static DigitalCurve lattice(std::shared_ptr<const LatticeSpec> spec);
  static DigitalCurve lattice(const LatticeSpec& spec);
  static DigitalCurve tabulated(std::vector<CurvePoint> points, double discount);

  /// Two-column CSV with header "strike,price". Strikes strictly
  /// increasing, prices non-increasing and not above `discount`. Violations
  /// throw InputError naming the line.
  static DigitalCurve read_csv(std::istream& in, double discount);
  static DigitalCurve read_csv_file(const std::string& path, double discount);

  CurveSource source() const noexcept { return source_; }
  double discount() const noexcept { return discount_; }

  /// Price of 1_{X > a}.
  double strict(double a) const;
  /// Price of 1_{X >= a}.
  double weak(double a) const;
  /// Price of (X - a)^+, the integral of strict over (a, ∞).
  double call(double a) const;
  /// True when weak(a) > strict(a).
  bool has_atom(double a) const;

  /// Strike past which the curve is identically zero (∞ for Black-Scholes).
  double support_end() const;

  const LatticeSpec* lattice_spec() const noexcept { return lattice_.get(); }
  const MarketParams* market() const noexcept { return market_.get(); }
  const std::vector<CurvePoint>& points() const noexcept { return points_; }

 private:
  DigitalCurve() = default;

  CurveSource source_ = CurveSource::BlackScholes;
  double discount_ = 1.0;
  std::shared_ptr<const MarketParams> market_;
  std::shared_ptr<const LatticeSpec> lattice_;
  std::vector<double> suffix_mass_price_;  ///< Σ_{i>=j} p_i S_i
  std::vector<CurvePoint> points_;
};

/// Price from digital prices: f(0)·discount + ∫ f'(a) strict(a) da plus
/// the jump terms Δ₋f·weak and Δ₊f·strict. Exact (summation by parts) on
/// lattice curves; adaptive quadrature to `tol` otherwise.
double price_via_digitals(const DigitalCurve& curve, const PiecewisePayoff& payoff,
                          double tol = 1e-10);

/// Price from call prices: f(0)·discount + ∫ f''(a) C(a) da, the same jump
/// terms, and Σ (f'(s_k+) - f'(s_k-)) C(s_k) including the kink at 0.
double price_via_calls(const DigitalCurve& curve, const PiecewisePayoff& payoff,
                       double tol = 1e-8);

}  // namespace binconv
