#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace binconv {

enum class DigitalConvention {
  Strict,  ///< pays 1_{X > a}
  Weak,    ///< pays 1_{X >= a}
};

enum class Smoothness {
  C0PiecewiseC1,            ///< jumps allowed, C¹ between breakpoints
  C1PiecewiseAbsContDeriv,  ///< f' absolutely continuous between breakpoints
  C3Smooth,                 ///< three continuous derivatives everywhere
};

/// Certificate |f'(a)| <= c1 + c2 a^p for a >= 0.
struct PolyBound {
  double exponent = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double at(double a) const;
};

using ScalarFn = std::function<double(double)>;

/// One smooth piece of a payoff. The functions must be evaluable on the
/// closed interval so one-sided limits at the breakpoints can be read off.
struct Piece {
  ScalarFn value;
  ScalarFn slope;
  ScalarFn curvature;  ///< optional: empty when f'' is not supplied
};

/// Data stored for a breakpoint s_k.
struct Breakpoint {
  double at = 0.0;
  double left = 0.0;   ///< f(s_k-)
  double value = 0.0;  ///< f(s_k)
  double right = 0.0;  ///< f(s_k+)
  double left_slope = 0.0;
  double right_slope = 0.0;
};

/// (s_k, Δ₋f(s_k), Δ₊f(s_k)) with Δ₋f = f(s_k) - f(s_k-) and
/// Δ₊f = f(s_k+) - f(s_k).
struct Jump {
  double at = 0.0;
  double minus = 0.0;
  double plus = 0.0;

  friend bool operator==(const Jump&, const Jump&) = default;
};

struct PiValidation {
  bool ok = false;
  std::string diagnostic;  ///< names the first violated condition; empty when ok

  explicit operator bool() const noexcept { return ok; }
};

/// A payoff that is C¹ off finitely many breakpoints 0 <= s_1 < ... < s_N.
/// Pieces are indexed 0..N: piece k lives on (s_k, s_{k+1}) with s_0 = 0
/// and s_{N+1} = ∞. The value at a breakpoint is stored separately from the
/// one-sided limits, so weak and strict digitals are both expressible.
/// Immutable after construction.
class PiecewisePayoff {
 public:
  /// `breakpoint_values[k]` is f(breakpoints[k]). When 0 is not among the
  /// breakpoints, f(0) is taken from the first piece.
  PiecewisePayoff(std::string name, std::vector<double> breakpoints,
                  std::vector<double> breakpoint_values, std::vector<Piece> pieces,
                  Smoothness smoothness, std::optional<PolyBound> bound);

  const std::string& name() const noexcept { return name_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  const std::optional<PolyBound>& poly_bound() const noexcept { return bound_; }
  std::span<const Breakpoint> breakpoints() const noexcept { return breakpoints_; }
  std::span<const Piece> pieces() const noexcept { return pieces_; }

  /// f(a); at a breakpoint the stored value, not a limit.
  double operator()(double a) const;

  /// f(a), except that a point within relative distance `rel_tol` of a
  /// breakpoint is treated as that breakpoint. Lattice pricers use this so
  /// their node convention matches the digital pricers.
  double eval_snapped(double a, double rel_tol) const;

  /// f'(a) off the breakpoints; at a breakpoint the right derivative.
  double slope(double a) const;

  /// f''(a) off the breakpoints. Throws InputError when not supplied.
  double curvature(double a) const;

  /// True iff every piece supplies f''.
  bool has_curvature() const noexcept;

  /// Index of the piece whose open interval contains a (breakpoints map to
  /// the piece on their right).
  std::size_t piece_index(double a) const;

  /// f(0) and f(0+).
  double value_at_zero() const noexcept { return value_at_zero_; }
  double right_limit_at_zero() const;
  double right_slope_at_zero() const;

  /// One entry per breakpoint, plus (0, 0, f(0+) - f(0)) first when f jumps
  /// at the origin.
  std::vector<Jump> jumps() const;

  /// Membership test for the admissible payoff class: finitely many
  /// breakpoints, finite jumps, and a polynomial-bound certificate
  /// consistent with sampled |f'| on a log grid up to 1e6.
  PiValidation validate() const;

 private:
  std::string name_;
  std::vector<Breakpoint> breakpoints_;
  std::vector<Piece> pieces_;
  Smoothness smoothness_;
  std::optional<PolyBound> bound_;
  double value_at_zero_ = 0.0;
  bool zero_is_breakpoint_ = false;
};

namespace payoffs {

PiecewisePayoff call(double strike);
PiecewisePayoff put(double strike);
PiecewisePayoff digital_geq(double strike);
PiecewisePayoff digital_gt(double strike);
PiecewisePayoff straddle(double strike);
/// ((x - K)^+)^4
PiecewisePayoff power_call4(double strike);
PiecewisePayoff butterfly(double k1, double k2, double k3);
PiecewisePayoff constant(double c);
/// f(x) = x
PiecewisePayoff identity();

/// Resolves "call:K", "put:K", "digital_geq:K", "digital_gt:K",
/// "straddle:K", "powercall4:K", "butterfly:K1,K2,K3". Throws InputError
/// on anything else.
PiecewisePayoff from_id(std::string_view id);

}  // namespace payoffs
}  // namespace binconv
