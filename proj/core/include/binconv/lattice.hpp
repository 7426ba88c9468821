#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binconv/market.hpp"
#include "binconv/payoff.hpp"

namespace binconv {

/// Relative tolerance for "strike sits on a terminal node".
inline constexpr double kNodeRelTol = 1e-12;

enum class SchemeKind {
  Crr,          ///< λ = 0
  JarrowRudd,   ///< λ = r/σ² - 1/2
  Tian,         ///< λ matching the geometric centre of Tian's u, d
  Custom,       ///< caller-supplied λ
  Centered,     ///< strike at the geometric mean of two adjacent nodes
  NodeAligned,  ///< strike exactly on the nearest terminal node
};

struct Scheme {
  SchemeKind kind = SchemeKind::Crr;
  double param = 0.0;  ///< λ for Custom, the strike for Centered / NodeAligned

  static Scheme crr() { return {SchemeKind::Crr, 0.0}; }
  static Scheme jarrow_rudd() { return {SchemeKind::JarrowRudd, 0.0}; }
  static Scheme tian() { return {SchemeKind::Tian, 0.0}; }
  static Scheme custom(double lambda) { return {SchemeKind::Custom, lambda}; }
  static Scheme centered(double strike) { return {SchemeKind::Centered, strike}; }
  static Scheme node_aligned(double strike) { return {SchemeKind::NodeAligned, strike}; }

  /// "crr", "jr", "tian", "custom:<lambda>", "centered:<strike>", "node:<strike>"
  static Scheme parse(std::string_view id);
  std::string id() const;
};

/// Binomial law of the terminal up-move count.
struct TerminalDistribution {
  std::vector<double> probs;      ///< n+1 entries, sums to 1
  std::vector<double> log_probs;  ///< finite even where probs underflow
  std::vector<double> survival;   ///< survival[j] = Σ_{i>=j} probs[i]; n+2 entries
};

struct StrikeLocation {
  std::size_t first_above = 0;       ///< first j with S_j > strike (off the node)
  std::optional<std::size_t> node;   ///< j with S_j == strike within kNodeRelTol
};

/// n-period lattice with u = e^{σ√Δt + λσ²Δt}, d = e^{-σ√Δt + λσ²Δt} and the
/// martingale probability p = (e^{rΔt} - d)/(u - d). Holds its terminal
/// prices and terminal distribution; immutable.
class LatticeSpec {
 public:
  int n() const noexcept { return n_; }
  double lambda() const noexcept { return lambda_; }
  double dt() const noexcept { return dt_; }
  double up() const noexcept { return up_; }
  double down() const noexcept { return down_; }
  double log_up() const noexcept { return log_up_; }
  double log_down() const noexcept { return log_down_; }
  double prob_up() const noexcept { return p_; }
  double spot() const noexcept { return spot_; }
  double discount() const noexcept { return discount_; }

  std::span<const double> terminal_prices() const noexcept { return prices_; }
  const TerminalDistribution& distribution() const noexcept { return dist_; }

  /// S0 u^j d^{n-j}, also for j outside 0..n.
  double node(long j) const;

  StrikeLocation locate(double strike) const;

 private:
  friend LatticeSpec build_lattice(const MarketParams& m, int n, const Scheme& scheme);

  int n_ = 0;
  double lambda_ = 0.0;
  double dt_ = 0.0;
  double up_ = 0.0;
  double down_ = 0.0;
  double log_up_ = 0.0;
  double log_down_ = 0.0;
  double p_ = 0.0;
  double spot_ = 0.0;
  double discount_ = 0.0;
  std::vector<double> prices_;
  TerminalDistribution dist_;
};

/// Throws InputError for n < 1, a non-positive centring strike, or a λ that
/// breaks d < e^{rΔt} < u.
LatticeSpec build_lattice(const MarketParams& m, int n, const Scheme& scheme);

/// λ placing `strike` at the geometric mean of terminal nodes j0-1 and j0,
/// j0 = ⌈γ̃⌉. Satisfies |λ| <= 1/(σ√(Tn)).
double lambda_centered(double strike, const MarketParams& m, int n);

/// λ moving the terminal node nearest to `strike` onto it.
double lambda_on_node(double strike, const MarketParams& m, int n);

double lambda_tian(const MarketParams& m, int n);

/// Binomial pmf by the ratio recursion, run outward from the mode and
/// normalised, so nothing overflows and tail underflow is harmless.
TerminalDistribution terminal_pmf(int n, double p);
inline const TerminalDistribution& terminal_pmf(const LatticeSpec& spec) {
  return spec.distribution();
}

double lattice_price_digital(const LatticeSpec& spec, double strike, DigitalConvention conv);

/// e^{-rT} Σ_j probs[j] f(S_j), with nodes within kNodeRelTol of a payoff
/// breakpoint evaluated at the breakpoint.
double lattice_price_payoff(const LatticeSpec& spec, const PiecewisePayoff& payoff);

double lattice_price_call(const LatticeSpec& spec, double strike);

}  // namespace binconv
