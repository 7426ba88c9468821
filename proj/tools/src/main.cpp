#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "binconv/errors.hpp"
#include "commands.hpp"

namespace {

void add_market(CLI::App* cmd, binconv::cli::MarketFlags& m) {
  cmd->add_option("--s0", m.spot, "spot price")->capture_default_str();
  cmd->add_option("--sigma", m.sigma, "volatility")->capture_default_str();
  cmd->add_option("--rate", m.rate, "risk-free rate")->capture_default_str();
  cmd->add_option("--maturity", m.maturity, "maturity in years")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace binconv::cli;
  CLI::App app{"binomial lattice convergence toolkit"};
  app.require_subcommand(1);

  PriceArgs price;
  auto* price_cmd = app.add_subcommand("price", "price one payoff on one lattice");
  add_market(price_cmd, price.market);
  price_cmd->add_option("--payoff", price.payoff, "payoff id, e.g. call:100")->required();
  price_cmd->add_option("--scheme", price.scheme, "crr, jr, tian, custom:L, centered:K, node:K")
      ->capture_default_str();
  price_cmd->add_option("--n", price.n, "number of periods")->required();
  price_cmd->add_option("--mode", price.mode, "direct or repform")->capture_default_str();

  StudyArgs study;
  auto* study_cmd = app.add_subcommand("study", "run a convergence ladder and write CSV");
  auto* config_opt = study_cmd->add_option("--config", study.config, "key=value config file");
  std::vector<CLI::Option*> inline_opts;
  inline_opts.push_back(study_cmd->add_option("--s0", study.market.spot));
  inline_opts.push_back(study_cmd->add_option("--sigma", study.market.sigma));
  inline_opts.push_back(study_cmd->add_option("--rate", study.market.rate));
  inline_opts.push_back(study_cmd->add_option("--maturity", study.market.maturity));
  inline_opts.push_back(study_cmd->add_option("--payoff", study.payoff));
  inline_opts.push_back(study_cmd->add_option("--scheme", study.scheme));
  inline_opts.push_back(study_cmd->add_option("--ladder", study.ladder, "e.g. 100,200,400"));
  inline_opts.push_back(
      study_cmd->add_option("--mode", study.mode, "direct, repform, smooth, expansion_check"));
  inline_opts.push_back(study_cmd->add_option("--alpha", study.alpha));
  inline_opts.push_back(study_cmd->add_option("--tolerance", study.tolerance));
  for (auto* opt : inline_opts) config_opt->excludes(opt);
  study_cmd->add_option("--out", study.out, "CSV path (stdout when absent)");

  StudyArgs smooth;
  smooth.mode = "smooth";
  smooth.ladder = "200,400,800,1600";
  auto* smooth_cmd = app.add_subcommand("smooth", "smooth estimator ladder on centred lattices");
  add_market(smooth_cmd, smooth.market);
  smooth_cmd->add_option("--payoff", smooth.payoff)->required();
  smooth_cmd->add_option("--alpha", smooth.alpha)->capture_default_str();
  smooth_cmd->add_option("--ladder", smooth.ladder)->capture_default_str();
  smooth_cmd->add_option("--grid-scale", smooth.grid_scale, "strike grid unit, 0 = spot")
      ->capture_default_str();
  smooth_cmd->add_option("--out", smooth.out, "CSV path (stdout when absent)");
  smooth_cmd->add_flag("--richardson", smooth.richardson, "add order-1 extrapolation");

  ExpandArgs expand;
  auto* expand_cmd = app.add_subcommand("expand", "print expansion coefficients as JSON");
  add_market(expand_cmd, expand.market);
  expand_cmd->add_option("--strike", expand.strike)->required();
  expand_cmd->add_option("--scheme", expand.scheme)->capture_default_str();
  expand_cmd->add_option("--n", expand.n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*price_cmd) return run_price(price);
    if (*study_cmd) return run_study_command(study);
    if (*smooth_cmd) return run_study_command(smooth);
    if (*expand_cmd) return run_expand(expand);
  } catch (const binconv::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const binconv::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  return 2;
}
