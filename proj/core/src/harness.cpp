#include "binconv/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "binconv/analytic.hpp"
#include "binconv/composite.hpp"
#include "binconv/errors.hpp"
#include "binconv/expansion.hpp"
#include "binconv/lattice.hpp"
#include "binconv/payoff.hpp"
#include "binconv/repform.hpp"

namespace binconv {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
    throw InputError(what + ": not a number: '" + text + "'");
  }
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

enum class Closed { None, Call, Put, DigitalWeak, DigitalStrict };

struct Target {
  Closed kind = Closed::None;
  double strike = 0.0;
};

Target classify(std::string_view id) {
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) return {};
  const std::string head(id.substr(0, colon));
  const std::string arg = trim(id.substr(colon + 1));
  Closed kind = Closed::None;
  if (head == "call") kind = Closed::Call;
  else if (head == "put") kind = Closed::Put;
  else if (head == "digital_geq") kind = Closed::DigitalWeak;
  else if (head == "digital_gt") kind = Closed::DigitalStrict;
  if (kind == Closed::None) return {};
  return {kind, parse_real(arg, "strike")};
}

double closed_form(const MarketParams& m, const Target& t) {
  switch (t.kind) {
    case Closed::Call: return bs_call(m, t.strike);
    case Closed::Put: return bs_put(m, t.strike);
    case Closed::DigitalWeak:
    case Closed::DigitalStrict: return bs_digital(m, t.strike);
    case Closed::None: break;
  }
  throw InputError("no closed form");
}

double predicted_error(const MarketParams& m, const LatticeSpec& spec,
                       const PiecewisePayoff& payoff, const Target& t) {
  switch (t.kind) {
    case Closed::Call:
    case Closed::Put:
      // lattice and limit both satisfy put-call parity, so the errors agree
      return predicted_call_error(expansion_terms(m, spec, t.strike), spec.n());
    case Closed::DigitalWeak:
      return predicted_digital_error(expansion_terms(m, spec, t.strike), spec.n(),
                                     DigitalConvention::Weak);
    case Closed::DigitalStrict:
      return predicted_digital_error(expansion_terms(m, spec, t.strike), spec.n(),
                                     DigitalConvention::Strict);
    case Closed::None: break;
  }
  return payoff.has_curvature() ? predicted_payoff_error_c2(m, spec, payoff)
                                : predicted_payoff_error(m, spec, payoff);
}

void format_real(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

StudyMode parse_mode(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "direct") return StudyMode::Direct;
  if (t == "repform") return StudyMode::Repform;
  if (t == "smooth") return StudyMode::Smooth;
  if (t == "expansion_check" || t == "expansion") return StudyMode::ExpansionCheck;
  throw InputError("unknown mode '" + std::string(text) + "'");
}

std::string mode_name(StudyMode mode) {
  switch (mode) {
    case StudyMode::Direct: return "direct";
    case StudyMode::Repform: return "repform";
    case StudyMode::Smooth: return "smooth";
    case StudyMode::ExpansionCheck: return "expansion_check";
  }
  return "direct";
}

void StudyConfig::validate() const {
  if (n_ladder.empty()) throw InputError("n_ladder is empty");
  for (std::size_t i = 0; i < n_ladder.size(); ++i) {
    if (n_ladder[i] < 1) throw InputError("n_ladder entries must be positive");
    if (i > 0 && n_ladder[i] <= n_ladder[i - 1]) {
      throw InputError("n_ladder must be strictly increasing");
    }
  }
  if (!(tolerance > 1e-14 && tolerance < 1e-4)) {
    throw InputError("tolerance must lie in (1e-14, 1e-4)");
  }
  if (mode == StudyMode::Smooth && !(alpha > 0.0 && alpha < 1.0 / 3.0)) {
    throw InputError("alpha must lie in (0, 1/3)");
  }
  if (grid_scale < 0.0) throw InputError("grid_scale must be non-negative");
  payoffs::from_id(payoff_id);
  if (mode != StudyMode::Smooth) Scheme::parse(scheme);
}

std::vector<int> parse_ladder(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item =
        trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    const char* begin = item.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (item.empty() || end != begin + item.size() || v < 1 || v > 1'000'000) {
      throw InputError("bad ladder entry '" + item + "'");
    }
    out.push_back(static_cast<int>(v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

StudyConfig parse_config(std::istream& in) {
  StudyConfig cfg;
  double spot = cfg.market.spot(), vol = cfg.market.volatility();
  double rate = cfg.market.rate(), maturity = cfg.market.maturity();
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) throw InputError(where + ": expected key=value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw InputError(where + ": duplicate key '" + key + "'");
    try {
      if (key == "spot") spot = parse_real(value, key);
      else if (key == "volatility") vol = parse_real(value, key);
      else if (key == "rate") rate = parse_real(value, key);
      else if (key == "maturity") maturity = parse_real(value, key);
      else if (key == "payoff_id") cfg.payoff_id = value;
      else if (key == "scheme") cfg.scheme = value;
      else if (key == "n_ladder") cfg.n_ladder = parse_ladder(value);
      else if (key == "mode") cfg.mode = parse_mode(value);
      else if (key == "alpha") cfg.alpha = parse_real(value, key);
      else if (key == "grid_scale") cfg.grid_scale = parse_real(value, key);
      else if (key == "output_path") cfg.output_path = value;
      else if (key == "tolerance") cfg.tolerance = parse_real(value, key);
      else throw InputError("unknown key '" + key + "'");
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  cfg.market = MarketParams(spot, vol, rate, maturity);
  cfg.validate();
  return cfg;
}

StudyConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse_config(in);
}

ConvergenceReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  const MarketParams& m = cfg.market;
  const PiecewisePayoff payoff = payoffs::from_id(cfg.payoff_id);
  const Target target = classify(cfg.payoff_id);

  ConvergenceReport report;
  double reference = 0.0;
  if (target.kind != Closed::None) {
    reference = closed_form(m, target);
    report.reference_source = "closed_form";
  } else {
    reference = bs_price_payoff_oracle(m, payoff, cfg.tolerance);
    report.reference_source = "quadrature_oracle";
  }

  std::map<int, double> errors;
  std::map<int, double> approx;
  for (int n : cfg.n_ladder) {
    StudyRow row;
    row.n = n;
    const std::string at = "n=" + std::to_string(n) + ": ";
    try {
      if (cfg.mode == StudyMode::Smooth) {
        SmoothOptions opts;
        opts.grid_scale = cfg.grid_scale;
        row.approx_price = smooth_estimate(m, payoff, n, cfg.alpha, opts).value;
      } else {
        const LatticeSpec spec = build_lattice(m, n, Scheme::parse(cfg.scheme));
        if (cfg.mode == StudyMode::Repform) {
          row.approx_price = price_via_digitals(DigitalCurve::lattice(spec), payoff, cfg.tolerance);
        } else {
          row.approx_price = lattice_price_payoff(spec, payoff);
        }
        if (cfg.mode == StudyMode::ExpansionCheck) {
          row.predicted_error = predicted_error(m, spec, payoff, target);
        }
      }
    } catch (const InputError& e) {
      throw InputError(at + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(at + e.what(), e.residual());
    }
    row.reference_price = reference;
    row.error = row.approx_price - row.reference_price;
    if (row.predicted_error) row.residual = row.error - *row.predicted_error;
    errors[n] = row.error;
    approx[n] = row.approx_price;
    report.rows.push_back(row);
  }

  std::size_t nonzero = 0;
  for (const auto& [n, e] : errors) nonzero += e != 0.0;
  if (nonzero >= 4) {
    const RateFit fit = fit_rate(errors);
    report.fitted_rate = fit.slope;
    report.fitted_coeff = fit.coefficient;
    report.r_squared = fit.r_squared;
    report.rate_fitted = true;
  }
  report.oscillation_flag = oscillates(errors);
  if (report.rate_fitted && !report.oscillation_flag) report.smooth_order = -report.fitted_rate;

  const auto& rows = report.rows;
  std::size_t i = rows.size() - 1;
  while (i > 0) {
    const double prev = rows[i - 1].error, cur = rows[i].error;
    if (sign_of(prev) == 0 || sign_of(prev) != sign_of(cur) || std::abs(cur) > std::abs(prev)) break;
    --i;
  }
  if (i + 1 < rows.size()) report.monotone_from = rows[i].n;

  if (cfg.mode == StudyMode::Smooth) report.richardson = richardson(approx, 1.0).extrapolated;
  return report;
}

RateFit fit_rate(const std::map<int, double>& errors) {
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& [n, e] : errors) {
    if (e == 0.0 || !std::isfinite(e)) {
      fit.excluded.push_back(n);
      continue;
    }
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(std::abs(e)));
  }
  if (xs.size() < 4) {
    throw NumericalError("rate fit needs at least 4 nonzero errors, got " +
                         std::to_string(xs.size()));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.coefficient = std::exp(my - fit.slope * mx);
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

bool oscillates(const std::map<int, double>& errors) {
  int last = 0;
  for (const auto& [n, e] : errors) {
    const int s = sign_of(e);
    if (s == 0) continue;
    if (last != 0 && s != last) return true;
    last = s;
  }
  return false;
}

ResidualVerdict residual_order_check(const std::map<int, double>& actual,
                                     const std::map<int, double>& predicted) {
  ResidualVerdict v;
  std::vector<std::pair<int, double>> r;
  for (const auto& [n, a] : actual) {
    const auto it = predicted.find(n);
    if (it != predicted.end()) r.emplace_back(n, a - it->second);
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double ratio = std::abs(r[i].second) / std::abs(r[i - 1].second);
    const double span = std::log(static_cast<double>(r[i].first) / r[i - 1].first);
    v.ratios.push_back(std::pow(ratio, std::log(2.0) / span));
  }
  if (v.ratios.empty()) return v;
  std::vector<double> sorted = v.ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  v.median_ratio = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  v.pass = v.median_ratio <= 0.45;
  return v;
}

void write_csv(std::ostream& out, const ConvergenceReport& report) {
  out << kCsvHeader << '\n';
  for (const auto& row : report.rows) {
    out << row.n << ',';
    format_real(out, row.approx_price);
    out << ',';
    format_real(out, row.reference_price);
    out << ',';
    format_real(out, row.error);
    out << ',';
    if (row.predicted_error) format_real(out, *row.predicted_error);
    out << ',';
    if (row.residual) format_real(out, *row.residual);
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const ConvergenceReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_csv(out, report);
}

}  // namespace binconv
