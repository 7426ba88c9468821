#include <benchmark/benchmark.h>

#include "binconv/analytic.hpp"
#include "binconv/composite.hpp"
#include "binconv/expansion.hpp"
#include "binconv/lattice.hpp"
#include "binconv/repform.hpp"

using namespace binconv;

namespace {
const MarketParams kMarket(100.0, 0.2, 0.05, 1.0);

void BM_TerminalPmf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(terminal_pmf(n, 0.51));
  state.SetComplexityN(n);
}
BENCHMARK(BM_TerminalPmf)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oN);

void BM_BuildLattice(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_lattice(kMarket, n, Scheme::centered(97.0)));
}
BENCHMARK(BM_BuildLattice)->RangeMultiplier(4)->Range(64, 16384);

void BM_LatticePricePayoff(benchmark::State& state) {
  const LatticeSpec spec = build_lattice(kMarket, static_cast<int>(state.range(0)), Scheme::crr());
  const auto fly = payoffs::butterfly(90.0, 100.0, 110.0);
  for (auto _ : state) benchmark::DoNotOptimize(lattice_price_payoff(spec, fly));
}
BENCHMARK(BM_LatticePricePayoff)->RangeMultiplier(4)->Range(64, 16384);

void BM_PriceViaDigitalsLattice(benchmark::State& state) {
  const LatticeSpec spec = build_lattice(kMarket, static_cast<int>(state.range(0)), Scheme::crr());
  const DigitalCurve curve = DigitalCurve::lattice(spec);
  const auto f = payoffs::power_call4(100.0);
  for (auto _ : state) benchmark::DoNotOptimize(price_via_digitals(curve, f));
}
BENCHMARK(BM_PriceViaDigitalsLattice)->RangeMultiplier(4)->Range(64, 16384);

void BM_OracleCall(benchmark::State& state) {
  const auto f = payoffs::call(100.0);
  for (auto _ : state) benchmark::DoNotOptimize(bs_price_payoff_oracle(kMarket, f, 1e-10));
}
BENCHMARK(BM_OracleCall);

void BM_ExpansionTerms(benchmark::State& state) {
  const LatticeSpec spec = build_lattice(kMarket, 1000, Scheme::crr());
  for (auto _ : state) benchmark::DoNotOptimize(expansion_terms(kMarket, spec, 95.0));
}
BENCHMARK(BM_ExpansionTerms);

void BM_PredictedPayoffError(benchmark::State& state) {
  const LatticeSpec spec = build_lattice(kMarket, static_cast<int>(state.range(0)), Scheme::crr());
  const auto fly = payoffs::butterfly(90.0, 100.0, 110.0);
  for (auto _ : state) benchmark::DoNotOptimize(predicted_payoff_error(kMarket, spec, fly));
}
BENCHMARK(BM_PredictedPayoffError)->RangeMultiplier(4)->Range(100, 6400);

void BM_SmoothEstimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = payoffs::power_call4(100.0);
  for (auto _ : state) benchmark::DoNotOptimize(smooth_estimate(kMarket, f, n, 0.3));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SmoothEstimate)->RangeMultiplier(2)->Range(200, 1600)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
