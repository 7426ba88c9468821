#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "binconv/analytic.hpp"
#include "binconv/errors.hpp"
#include "binconv/expansion.hpp"
#include "binconv/harness.hpp"
#include "binconv/lattice.hpp"
#include "oracles.hpp"

using namespace binconv;

namespace {
const MarketParams kMarket(100.0, 0.2, 0.05, 1.0);
constexpr double kPi = 3.14159265358979323846;

double median_ratio(const PiecewisePayoff& f, double reference, const std::vector<int>& ladder,
                    const std::function<double(const LatticeSpec&)>& predict) {
  std::map<int, double> actual, predicted;
  for (int n : ladder) {
    const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
    actual[n] = lattice_price_payoff(s, f) - reference;
    predicted[n] = predict(s);
  }
  return residual_order_check(actual, predicted).median_ratio;
}
}  // namespace

TEST(Frac, Examples) {
  EXPECT_EQ(frac(2.25), 0.25);
  EXPECT_EQ(frac(-0.25), 0.75);
  EXPECT_EQ(frac(3.0), 0.0);
  EXPECT_LT(frac(-1e-18), 1.0);
  EXPECT_GE(frac(-1e-18), 0.0);
}

TEST(ExpansionTerms, BasicRelations) {
  const LatticeSpec s = build_lattice(kMarket, 250, Scheme::jarrow_rudd());
  const ExpansionTerms t = expansion_terms(kMarket, s, 97.0);
  EXPECT_EQ(t.d2, t.d1 - kMarket.total_vol());
  EXPECT_GE(t.delta_n, -1.0);
  EXPECT_LE(t.delta_n, 1.0);
  EXPECT_EQ(t.lambda, s.lambda());
  EXPECT_NEAR(t.digital_scale, std::exp(-0.05) * std::exp(-t.d2 * t.d2 / 2) / std::sqrt(2 * kPi), 1e-15);
}

TEST(ExpansionTerms, OnNodeDeltaIsOne) {
  for (int n : {10, 99, 1000}) {
    for (double k : {85.0, 100.0, 121.0}) {
      const LatticeSpec s = build_lattice(kMarket, n, Scheme::node_aligned(k));
      const ExpansionTerms t = expansion_terms(kMarket, s, k);
      EXPECT_TRUE(t.on_node);
      EXPECT_NEAR(t.delta_n, 1.0, 1e-9);
    }
  }
  const LatticeSpec crr = build_lattice(kMarket, 100, Scheme::crr());
  EXPECT_TRUE(expansion_terms(kMarket, crr, crr.terminal_prices()[40]).on_node);
}

TEST(ExpansionTerms, CentredStrikeHasZeroDelta) {
  oracle::Gen gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    const double k = gen.log_uniform(50.0, 200.0);
    const int n = gen.integer(1, 3000);
    const LatticeSpec s = build_lattice(kMarket, n, Scheme::centered(k));
    const ExpansionTerms t = expansion_terms(kMarket, s, k);
    EXPECT_FALSE(t.on_node);
    EXPECT_NEAR(t.delta_n, 0.0, 1e-9) << "n=" << n << " k=" << k;
  }
}

TEST(ExpansionTerms, DeltaRangeAndDensity) {
  double lo = 1.0, hi = -1.0;
  for (int n = 1; n <= 1000; ++n) {
    const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
    const double delta = expansion_terms(kMarket, s, 95.0).delta_n;
    ASSERT_GE(delta, -1.0);
    ASSERT_LE(delta, 1.0);
    lo = std::min(lo, delta);
    hi = std::max(hi, delta);
  }
  EXPECT_LT(lo, -0.95);
  EXPECT_GT(hi, 0.95);
}

TEST(ExpansionTerms, BTildeIsDienerA) {
  for (double sigma : {0.1, 0.2, 0.45}) {
    for (double r : {0.0, 0.03, 0.08}) {
      const MarketParams m(1.0, sigma, r, 1.0);
      const LatticeSpec s = build_lattice(m, 300, Scheme::crr());
      for (double k : {0.8, 0.95, 1.0, 1.2}) {
        const double d1 = (std::log(1.0 / k) + r + 0.5 * sigma * sigma) / sigma;
        const double d2 = d1 - sigma;
        const double a = -sigma * sigma * (6 + d1 * d1 + d2 * d2) + 4 * (d1 * d1 - d2 * d2) * r - 12 * r * r;
        EXPECT_NEAR(expansion_terms(m, s, k).b_tilde_n, a, 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST(PredictedDigital, StrictEqualsWeakOffNode) {
  const LatticeSpec s = build_lattice(kMarket, 401, Scheme::crr());
  const ExpansionTerms t = expansion_terms(kMarket, s, 95.0);
  ASSERT_FALSE(t.on_node);
  EXPECT_EQ(predicted_digital_error(t, 401, DigitalConvention::Strict),
            predicted_digital_error(t, 401, DigitalConvention::Weak));
}

TEST(PredictedDigital, OnNodeBranches) {
  const int n = 400;
  const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
  const ExpansionTerms t = expansion_terms(kMarket, s, 100.0);
  ASSERT_TRUE(t.on_node);
  const double rn = std::sqrt(static_cast<double>(n));
  const double weak = t.digital_scale * (1.0 / rn - t.d2 / (2.0 * n) + t.b_n / n);
  const double strict = t.digital_scale * (-1.0 / rn - t.d2 / (2.0 * n) + t.b_n / n);
  EXPECT_NEAR(predicted_digital_error(t, n, DigitalConvention::Weak), weak, 1e-15);
  EXPECT_NEAR(predicted_digital_error(t, n, DigitalConvention::Strict), strict, 1e-15);
  EXPECT_NEAR(t.j_n, weak, 1e-15);
  EXPECT_NEAR(t.j_hat_n, strict, 1e-15);
}

TEST(PredictedCall, OnNodeUsesBTildeOnly) {
  const int n = 400;
  const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
  const ExpansionTerms t = expansion_terms(kMarket, s, 100.0);
  const double scale = 100.0 * std::exp(-t.d1 * t.d1 / 2) / (24 * 0.2 * std::sqrt(2 * kPi));
  EXPECT_NEAR(predicted_call_error(t, n), scale * t.b_tilde_n / n, 1e-15);
}

TEST(PredictedCall, DienerCrossCheck) {
  for (double sigma : {0.2, 0.35}) {
    const MarketParams m(1.0, sigma, 0.05, 1.0);
    for (int n : {37, 100, 1000}) {
      const LatticeSpec s = build_lattice(m, n, Scheme::crr());
      for (double k : {0.9, 1.0, 1.1}) {
        const double dd = diener_crr_call_error(m, n, k);
        EXPECT_NEAR(dd, predicted_call_error(expansion_terms(m, s, k), n), 1e-12)
            << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(PredictedCall, DienerRejectsOtherMarkets) {
  EXPECT_THROW(diener_crr_call_error(kMarket, 100, 100.0), InputError);
  EXPECT_THROW(diener_crr_call_error(MarketParams(1.0, 0.2, 0.05, 2.0), 100, 1.0), InputError);
}

TEST(PredictedCall, DienerOnNodeBranch) {
  const MarketParams m(1.0, 0.2, 0.05, 1.0);
  const double d1 = (0.05 + 0.02) / 0.2, d2 = d1 - 0.2;
  const double a = -0.04 * (6 + d1 * d1 + d2 * d2) + 4 * (d1 * d1 - d2 * d2) * 0.05 - 12 * 0.0025;
  const double want = std::exp(-d1 * d1 / 2) / (24 * 0.2 * std::sqrt(2 * kPi)) * a / 100.0;
  EXPECT_NEAR(diener_crr_call_error(m, 100, 1.0), want, 1e-15);
}

TEST(ResidualOrder, DigitalAndCallAtTheMoney) {
  const std::vector<int> ladder{200, 400, 800, 1600};
  const double call_ref = bs_call(kMarket, 100.0);
  const double dig_ref = bs_digital(kMarket, 100.0);
  EXPECT_LE(median_ratio(payoffs::call(100.0), call_ref, ladder,
                         [](const LatticeSpec& s) {
                           return predicted_call_error(expansion_terms(kMarket, s, 100.0), s.n());
                         }),
            0.45);
  for (auto conv : {DigitalConvention::Strict, DigitalConvention::Weak}) {
    const auto f = conv == DigitalConvention::Strict ? payoffs::digital_gt(100.0) : payoffs::digital_geq(100.0);
    EXPECT_LE(median_ratio(f, dig_ref, ladder,
                           [conv](const LatticeSpec& s) {
                             return predicted_digital_error(expansion_terms(kMarket, s, 100.0), s.n(), conv);
                           }),
              0.45);
  }
}

TEST(PayoffError, WeakDigitalOnNodeIsJn) {
  const LatticeSpec s = build_lattice(kMarket, 300, Scheme::node_aligned(104.0));
  const ExpansionTerms t = expansion_terms(kMarket, s, 104.0);
  ASSERT_TRUE(t.on_node);
  EXPECT_NEAR(predicted_payoff_error(kMarket, s, payoffs::digital_geq(104.0)), t.j_n, 1e-14);
  EXPECT_NEAR(predicted_payoff_error(kMarket, s, payoffs::digital_gt(104.0)), t.j_hat_n, 1e-14);
}

TEST(PayoffError, OffNodeJumpUsesJn) {
  const LatticeSpec s = build_lattice(kMarket, 301, Scheme::crr());
  const ExpansionTerms t = expansion_terms(kMarket, s, 95.0);
  ASSERT_FALSE(t.on_node);
  EXPECT_NEAR(predicted_payoff_error(kMarket, s, payoffs::digital_gt(95.0)), t.j_n, 1e-14);
}

TEST(PayoffErrorC2, CallIsKinkTerm) {
  for (int n : {100, 333, 1000}) {
    const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
    for (double k : {90.0, 100.0, 117.0}) {
      const double want = predicted_call_error(expansion_terms(kMarket, s, k), n);
      EXPECT_NEAR(predicted_payoff_error_c2(kMarket, s, payoffs::call(k)), want, 1e-14);
    }
  }
}

TEST(PayoffErrorC2, StraddleIsTwiceTheKink) {
  const LatticeSpec s = build_lattice(kMarket, 500, Scheme::jarrow_rudd());
  const ExpansionTerms t = expansion_terms(kMarket, s, 103.0);
  const auto parts = payoff_error_parts_c2(kMarket, s, payoffs::straddle(103.0));
  EXPECT_NEAR(parts.kink_terms, 2.0 * t.h_n / 500, 1e-14);
  EXPECT_NEAR(parts.value, 2.0 * t.h_n / 500, 1e-14);
}

TEST(PayoffErrorC2, SmoothPayoffIsIntegralOnly) {
  const LatticeSpec s = build_lattice(kMarket, 500, Scheme::crr());
  const auto parts = payoff_error_parts_c2(kMarket, s, payoffs::power_call4(100.0));
  EXPECT_EQ(parts.jump_terms, 0.0);
  EXPECT_EQ(parts.kink_terms, 0.0);
  EXPECT_DOUBLE_EQ(parts.value, parts.inv_n_integral / 500);
}

TEST(PayoffErrorC2, NeedsCurvature) {
  const PiecewisePayoff p("no_curvature", {}, {},
                          {Piece{[](double a) { return a; }, [](double) { return 1.0; }, {}}},
                          Smoothness::C3Smooth, PolyBound{0.0, 1.0, 0.0});
  const LatticeSpec s = build_lattice(kMarket, 50, Scheme::crr());
  EXPECT_THROW(predicted_payoff_error_c2(kMarket, s, p), InputError);
}

TEST(PayoffError, RoutesAgreeToThreeHalvesOrder) {
  // the routes differ by an integration by parts against the Δ_n sawtooth,
  // which is o(1/n) but not zero; measure it against the 1/n coefficient
  for (const auto& f : {payoffs::call(90.0), payoffs::straddle(105.0), payoffs::butterfly(90.0, 100.0, 110.0),
                        payoffs::power_call4(100.0)}) {
    for (int n : {100, 400, 1600, 6400}) {
      const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
      const double c2 = predicted_payoff_error_c2(kMarket, s, f);
      const double diff = predicted_payoff_error(kMarket, s, f) - c2;
      const double scale = std::max(1.0, std::abs(n * c2));
      EXPECT_LE(std::abs(diff) * std::pow(n, 1.5) / scale, 1.0) << f.name() << " n=" << n;
    }
  }
}

TEST(PayoffError, MatchesDirectLatticeError) {
  const auto fly = payoffs::butterfly(90.0, 100.0, 110.0);
  const double ref = bs_price_payoff_oracle(kMarket, fly, 1e-12);
  for (int n : {100, 400, 1600}) {
    const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
    const double actual = lattice_price_payoff(s, fly) - ref;
    EXPECT_LE(std::abs(actual - predicted_payoff_error(kMarket, s, fly)), 0.2 * std::pow(n, -1.5));
  }
}

TEST(PayoffError, IntegralsBoundedInN) {
  for (const auto& f : {payoffs::call(90.0), payoffs::butterfly(90.0, 100.0, 110.0), payoffs::power_call4(100.0)}) {
    double lo = INFINITY, hi = 0.0;
    for (int n : {100, 316, 1000, 3162, 10000}) {
      const LatticeSpec s = build_lattice(kMarket, n, Scheme::crr());
      const auto parts = payoff_error_parts(kMarket, s, f);
      ASSERT_TRUE(std::isfinite(parts.root_n_integral));
      ASSERT_TRUE(std::isfinite(parts.inv_n_integral));
      const double mag = std::abs(parts.root_n_integral) + std::abs(parts.inv_n_integral);
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    ASSERT_GT(lo, 0.0);
    ::testing::Test::RecordProperty(f.name() + "_max_over_min", std::to_string(hi / lo));
    EXPECT_LT(hi / lo, 10.0) << f.name();
  }
}
