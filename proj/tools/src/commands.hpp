#pragma once

#include <optional>
#include <string>

#include "binconv/harness.hpp"

namespace binconv::cli {

struct MarketFlags {
  double spot = 100.0;
  double sigma = 0.2;
  double rate = 0.05;
  double maturity = 1.0;

  MarketParams params() const { return MarketParams(spot, sigma, rate, maturity); }
};

struct PriceArgs {
  MarketFlags market;
  std::string payoff;
  std::string scheme = "crr";
  int n = 0;
  std::string mode = "direct";
};

struct StudyArgs {
  MarketFlags market;
  std::optional<std::string> config;
  std::string payoff = "call:100";
  std::string scheme = "crr";
  std::string ladder = "100,200,400,800,1600,3200";
  std::string mode = "direct";
  double alpha = 0.3;
  double grid_scale = 0.0;
  double tolerance = 1e-10;
  std::string out;
  bool richardson = false;
};

struct ExpandArgs {
  MarketFlags market;
  double strike = 0.0;
  std::string scheme = "crr";
  int n = 0;
};

int run_price(const PriceArgs& args);
int run_study_command(const StudyArgs& args);
int run_expand(const ExpandArgs& args);

}  // namespace binconv::cli
