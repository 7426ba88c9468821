#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "binconv/errors.hpp"
#include "binconv/expansion.hpp"
#include "binconv/lattice.hpp"
#include "binconv/payoff.hpp"
#include "binconv/repform.hpp"
#include "json.hpp"

namespace binconv::cli {

using nlohmann::ordered_json;

int run_price(const PriceArgs& args) {
  const MarketParams m = args.market.params();
  const PiecewisePayoff payoff = payoffs::from_id(args.payoff);
  const LatticeSpec spec = build_lattice(m, args.n, Scheme::parse(args.scheme));
  const StudyMode mode = parse_mode(args.mode);
  double value = 0.0;
  if (mode == StudyMode::Direct) {
    value = lattice_price_payoff(spec, payoff);
  } else if (mode == StudyMode::Repform) {
    value = price_via_digitals(DigitalCurve::lattice(spec), payoff);
  } else {
    throw InputError("price supports --mode direct or repform");
  }
  ordered_json out;
  out["payoff"] = args.payoff;
  out["scheme"] = Scheme::parse(args.scheme).id();
  out["n"] = args.n;
  out["mode"] = mode_name(mode);
  out["lambda"] = spec.lambda();
  out["price"] = value;
  std::cout << out.dump(2) << '\n';
  return 0;
}

namespace {

ordered_json summary_of(const StudyConfig& cfg, const ConvergenceReport& r, bool richardson) {
  ordered_json s;
  s["payoff_id"] = cfg.payoff_id;
  s["scheme"] = cfg.scheme;
  s["mode"] = mode_name(cfg.mode);
  s["reference_source"] = r.reference_source;
  if (r.rate_fitted) {
    s["fitted_rate"] = r.fitted_rate;
    s["fitted_coeff"] = r.fitted_coeff;
    s["r_squared"] = r.r_squared;
  } else {
    s["fitted_rate"] = nullptr;
  }
  s["oscillation_flag"] = r.oscillation_flag;
  s["smooth_order"] = r.smooth_order ? ordered_json(*r.smooth_order) : ordered_json(nullptr);
  s["monotone_from"] = r.monotone_from ? ordered_json(*r.monotone_from) : ordered_json(nullptr);
  if (cfg.mode == StudyMode::ExpansionCheck) {
    std::map<int, double> actual, predicted;
    for (const auto& row : r.rows) {
      actual[row.n] = row.error;
      predicted[row.n] = *row.predicted_error;
    }
    const ResidualVerdict v = residual_order_check(actual, predicted);
    s["residual_order_check"] = v.pass ? "PASS" : "FAIL";
    s["median_halving_ratio"] = v.median_ratio;
  }
  if (richardson) {
    ordered_json rows = ordered_json::array();
    const double ref = r.rows.front().reference_price;
    for (const auto& [n, value] : r.richardson) {
      rows.push_back({{"n", n}, {"extrapolated", value}, {"error", value - ref}});
    }
    s["richardson"] = rows;
  }
  return s;
}

}  // namespace

int run_study_command(const StudyArgs& args) {
  StudyConfig cfg;
  if (args.config) {
    cfg = read_config_file(*args.config);
  } else {
    cfg.market = args.market.params();
    cfg.payoff_id = args.payoff;
    cfg.scheme = args.scheme;
    cfg.n_ladder = parse_ladder(args.ladder);
    cfg.mode = parse_mode(args.mode);
    cfg.alpha = args.alpha;
    cfg.grid_scale = args.grid_scale;
    cfg.tolerance = args.tolerance;
  }
  if (!args.out.empty()) cfg.output_path = args.out;
  cfg.validate();

  const ConvergenceReport report = run_study(cfg);
  const ordered_json summary = summary_of(cfg, report, args.richardson);
  if (cfg.output_path.empty()) {
    write_csv(std::cout, report);
    std::cerr << summary.dump(2) << '\n';
  } else {
    write_csv_file(cfg.output_path, report);
    const std::string sidecar = cfg.output_path + ".summary.json";
    std::ofstream side(sidecar);
    if (!side) throw InputError("cannot write '" + sidecar + "'");
    side << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
  }
  return 0;
}

int run_expand(const ExpandArgs& args) {
  const MarketParams m = args.market.params();
  const LatticeSpec spec = build_lattice(m, args.n, Scheme::parse(args.scheme));
  const ExpansionTerms t = expansion_terms(m, spec, args.strike);
  ordered_json out;
  out["strike"] = t.strike;
  out["n"] = t.n;
  out["scheme"] = Scheme::parse(args.scheme).id();
  out["lambda"] = t.lambda;
  out["d1"] = t.d1;
  out["d2"] = t.d2;
  out["delta_n"] = t.delta_n;
  out["on_node"] = t.on_node;
  out["b_n"] = t.b_n;
  out["b_tilde_n"] = t.b_tilde_n;
  out["j_n"] = t.j_n;
  out["j_hat_n"] = t.j_hat_n;
  out["h_n"] = t.h_n;
  out["digital_scale"] = t.digital_scale;
  out["call_scale"] = t.call_scale;
  out["predicted_call_error"] = predicted_call_error(t, t.n);
  out["predicted_digital_error_weak"] = predicted_digital_error(t, t.n, DigitalConvention::Weak);
  out["predicted_digital_error_strict"] =
      predicted_digital_error(t, t.n, DigitalConvention::Strict);
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace binconv::cli
