#pragma once

#include "binconv/lattice.hpp"
#include "binconv/market.hpp"
#include "binconv/payoff.hpp"

namespace binconv {

/// x - floor(x), always in [0, 1).
double frac(double x);

/// First- and second-order coefficients of the binomial-vs-Black-Scholes
/// error at one strike, for one lattice.
struct ExpansionTerms {
  double strike = 0.0;
  int n = 0;
  double lambda = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  /// 1 - 2 frac[(log(S0/a) + n log d)/log(u/d)]; forced to 1 on a node.
  double delta_n = 0.0;
  bool on_node = false;
  double b_n = 0.0;
  double b_tilde_n = 0.0;
  double j_n = 0.0;      ///< weak digital error, Δ_n branch
  double j_hat_n = 0.0;  ///< strict digital error at a node, Δ_n - 2 branch
  double h_n = 0.0;      ///< n × call error
  double digital_scale = 0.0;  ///< e^{-rT} e^{-d2²/2} / √(2π)
  double call_scale = 0.0;     ///< S0 e^{-d1²/2} / (24σ√(2πT))
};

ExpansionTerms expansion_terms(const MarketParams& m, const LatticeSpec& spec, double strike);

/// digital_scale · [Δ/√n - d2Δ²/(2n) + B_n/n], Δ = Δ_n except for a strict
/// digital whose strike is a node, where Δ = Δ_n - 2.
double predicted_digital_error(const ExpansionTerms& terms, int n, DigitalConvention conv);

/// H_n / n
double predicted_call_error(const ExpansionTerms& terms, int n);

/// The pieces of a general-payoff error prediction, kept apart so callers
/// can inspect their boundedness in n.
struct PayoffErrorParts {
  double root_n_integral = 0.0;  ///< coefficient of 1/√n (first-derivative route only)
  double inv_n_integral = 0.0;   ///< coefficient of 1/n
  double jump_terms = 0.0;
  double kink_terms = 0.0;       ///< second-derivative route only, already divided by n
  double value = 0.0;            ///< the total prediction
};

/// First-derivative route: integrals of f' against the digital error
/// density, subdivided at every terminal node, plus jump terms (J_n on
/// off-node jumps, J_n / Ĵ_n for Δ₋ / Δ₊ at nodes).
PayoffErrorParts payoff_error_parts(const MarketParams& m, const LatticeSpec& spec,
                                    const PiecewisePayoff& payoff, double rel_tol = 1e-10);

/// Second-derivative route: (1/n)∫ f'' H_n, the same jump terms, and
/// (1/n) Σ (f'(s_k+) - f'(s_k-)) H_n(s_k). Needs f'' on every piece.
PayoffErrorParts payoff_error_parts_c2(const MarketParams& m, const LatticeSpec& spec,
                                       const PiecewisePayoff& payoff, double rel_tol = 1e-10);

double predicted_payoff_error(const MarketParams& m, const LatticeSpec& spec,
                              const PiecewisePayoff& payoff);
double predicted_payoff_error_c2(const MarketParams& m, const LatticeSpec& spec,
                                 const PiecewisePayoff& payoff);

/// Diener & Diener's CRR call error for S0 = 1, T = 1, computed on its own
/// path (no ExpansionTerms). Throws InputError unless S0 = T = 1.
double diener_crr_call_error(const MarketParams& m, int n, double strike);

}  // namespace binconv
