#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "binconv/market.hpp"

namespace binconv {

enum class StudyMode { Direct, Repform, Smooth, ExpansionCheck };

StudyMode parse_mode(std::string_view text);
std::string mode_name(StudyMode mode);

struct StudyConfig {
  MarketParams market{100.0, 0.2, 0.05, 1.0};
  std::string payoff_id = "call:100";
  std::string scheme = "crr";
  std::vector<int> n_ladder{100, 200, 400, 800, 1600, 3200};
  StudyMode mode = StudyMode::Direct;
  double alpha = 0.3;
  double grid_scale = 0.0;  ///< smooth mode only; 0 means the spot
  std::string output_path;
  double tolerance = 1e-10;  ///< quadrature tolerance for oracle and repform integrals

  /// Throws InputError on an empty or non-increasing ladder, n < 1, or a
  /// tolerance outside the oracle's range.
  void validate() const;
};

/// Flat "key=value" lines. Keys: spot, volatility, rate, maturity,
/// payoff_id, scheme, n_ladder, mode, alpha, grid_scale, output_path,
/// tolerance. Blank lines and lines starting with '#' are ignored. Unknown
/// keys, duplicates and malformed values throw InputError naming the line.
StudyConfig parse_config(std::istream& in);
StudyConfig read_config_file(const std::string& path);

/// "100,200,400"
std::vector<int> parse_ladder(std::string_view text);

struct StudyRow {
  int n = 0;
  double approx_price = 0.0;
  double reference_price = 0.0;
  double error = 0.0;  ///< approx_price - reference_price
  std::optional<double> predicted_error;
  std::optional<double> residual;  ///< error - predicted_error
};

struct ConvergenceReport {
  std::vector<StudyRow> rows;
  double fitted_rate = 0.0;
  double fitted_coeff = 0.0;
  double r_squared = 0.0;
  bool rate_fitted = false;  ///< false when fewer than 4 usable rungs
  bool oscillation_flag = false;
  std::optional<double> smooth_order;
  /// Smallest ladder n from which the error keeps its sign and its
  /// magnitude never grows. Absent when the last two rungs already disagree.
  std::optional<int> monotone_from;
  std::string reference_source;  ///< "closed_form" or "quadrature_oracle"
  std::map<int, double> richardson;  ///< smooth mode only, order 1
};

/// Runs the ladder sequentially. A failure at one rung is rethrown with the
/// failing n in the message and the original exception type.
ConvergenceReport run_study(const StudyConfig& cfg);

struct RateFit {
  double slope = 0.0;
  double coefficient = 0.0;
  double r_squared = 0.0;
  std::vector<int> excluded;  ///< rungs with zero error
};

/// Least squares of log|error| on log n. Throws NumericalError with fewer
/// than 4 nonzero errors.
RateFit fit_rate(const std::map<int, double>& errors);

/// True when consecutive nonzero errors change sign.
bool oscillates(const std::map<int, double>& errors);

struct ResidualVerdict {
  bool pass = false;
  double median_ratio = 0.0;
  std::vector<double> ratios;  ///< |r_next|/|r_n|, rescaled to a doubling of n
};

/// r_n = actual - predicted on the common ladder; PASS iff the median of the
/// halving ratios is at most 0.45. Ratios between rungs that are not a
/// doubling apart are rescaled as ratio^(log 2 / log(n_next/n)).
ResidualVerdict residual_order_check(const std::map<int, double>& actual,
                                     const std::map<int, double>& predicted);

inline constexpr std::string_view kCsvHeader =
    "n,approx_price,reference_price,error,predicted_error,residual";

void write_csv(std::ostream& out, const ConvergenceReport& report);
/// Writes to `path`; throws InputError when the file cannot be opened.
void write_csv_file(const std::string& path, const ConvergenceReport& report);

}  // namespace binconv
