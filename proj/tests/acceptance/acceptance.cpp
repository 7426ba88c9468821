// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "binconv/analytic.hpp"
#include "binconv/composite.hpp"
#include "binconv/expansion.hpp"
#include "binconv/harness.hpp"
#include "binconv/lattice.hpp"
#include "binconv/repform.hpp"
#include "oracles.hpp"

using namespace binconv;

namespace {

const MarketParams kMarket(100.0, 0.2, 0.05, 1.0);
const std::vector<int> kLadder{100, 200, 400, 800, 1600, 3200};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::map<int, double> column(const ConvergenceReport& r, bool predicted) {
  std::map<int, double> out;
  for (const auto& row : r.rows) out[row.n] = predicted ? *row.predicted_error : row.error;
  return out;
}

ConvergenceReport study(const std::string& payoff, const std::string& scheme, StudyMode mode,
                        std::vector<int> ladder = kLadder) {
  StudyConfig c;
  c.market = kMarket;
  c.payoff_id = payoff;
  c.scheme = scheme;
  c.mode = mode;
  c.n_ladder = std::move(ladder);
  return run_study(c);
}

ResidualVerdict expansion_verdict(const std::string& payoff, const std::string& scheme) {
  const ConvergenceReport r = study(payoff, scheme, StudyMode::ExpansionCheck);
  return residual_order_check(column(r, false), column(r, true));
}

Outcome lattice_exactness() {
  const std::vector<std::string> ids{"call:100", "put:100", "straddle:100", "digital_geq:100",
                                     "digital_gt:100", "butterfly:90,100,110", "powercall4:100"};
  const std::vector<Scheme> schemes{Scheme::crr(), Scheme::jarrow_rudd(), Scheme::tian(),
                                    Scheme::centered(100.0)};
  double worst = 0.0;
  std::string where;
  for (const Scheme& scheme : schemes) {
    for (int n : {1, 2, 3, 10, 101, 500}) {
      const LatticeSpec spec = build_lattice(kMarket, n, scheme);
      const DigitalCurve curve = DigitalCurve::lattice(spec);
      for (const auto& id : ids) {
        const PiecewisePayoff f = payoffs::from_id(id);
        const double direct = lattice_price_payoff(spec, f);
        const double gap = std::abs(price_via_digitals(curve, f) - direct) / std::max(std::abs(direct), 1e-300);
        if (direct == 0.0 && price_via_digitals(curve, f) == 0.0) continue;
        if (gap > worst) {
          worst = gap;
          where = scheme.id() + " n=" + std::to_string(n) + " " + id;
        }
      }
    }
  }
  return {worst <= 1e-10, "max relative gap " + fmt("%.2e", worst) + " (" + where + ")"};
}

Outcome call_rate() {
  const ConvergenceReport r = study("call:100", "crr", StudyMode::Direct);
  double lo = INFINITY, hi = 0.0;
  for (const auto& row : r.rows) {
    const double scaled = row.n * std::abs(row.error);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  const bool pass = hi / lo <= 10.0 && r.fitted_rate >= -1.3 && r.fitted_rate <= -0.75;
  return {pass, "slope " + fmt("%.4f", r.fitted_rate) + ", n|error| max/min " + fmt("%.3f", hi / lo)};
}

Outcome digital_rate() {
  const ConvergenceReport r = study("digital_gt:95", "crr", StudyMode::ExpansionCheck);
  const ResidualVerdict v = residual_order_check(column(r, false), column(r, true));
  const bool slope_ok = r.fitted_rate >= -0.7 && r.fitted_rate <= -0.35;
  std::string ratios;
  for (double x : v.ratios) ratios += (ratios.empty() ? "" : " ") + fmt("%.3f", x);
  return {slope_ok && v.pass, "slope " + fmt("%.4f", r.fitted_rate) + (slope_ok ? " (in range)" : " (out of range)") +
                                  ", residual median halving ratio " + fmt("%.3f", v.median_ratio) +
                                  " [" + ratios + "]"};
}

Outcome call_expansion() {
  bool pass = true;
  std::string detail;
  for (const char* id : {"call:90", "call:100", "call:110"}) {
    const ResidualVerdict v = expansion_verdict(id, "crr");
    pass = pass && v.pass;
    detail += std::string(detail.empty() ? "" : ", ") + id + " median " + fmt("%.3f", v.median_ratio);
  }
  return {pass, detail};
}

Outcome diener() {
  double worst = 0.0;
  const MarketParams m(1.0, 0.2, 0.05, 1.0);
  for (int n : {100, 1000}) {
    const LatticeSpec spec = build_lattice(m, n, Scheme::crr());
    for (double k : {0.9, 1.0, 1.1}) {
      const double gap = std::abs(diener_crr_call_error(m, n, k) - predicted_call_error(expansion_terms(m, spec, k), n));
      worst = std::max(worst, gap);
    }
  }
  return {worst <= 1e-12, "max |difference| " + fmt("%.2e", worst)};
}

Outcome node_digital() {
  bool all_on_node = true;
  for (int n : kLadder) {
    const LatticeSpec spec = build_lattice(kMarket, n, Scheme::node_aligned(95.0));
    all_on_node = all_on_node && expansion_terms(kMarket, spec, 95.0).on_node;
  }
  const ResidualVerdict strict = expansion_verdict("digital_gt:95", "node:95");
  const ResidualVerdict weak = expansion_verdict("digital_geq:95", "node:95");
  return {all_on_node && strict.pass && weak.pass,
          std::string(all_on_node ? "strike on a node at every rung" : "strike NOT on a node") +
              ", strict median " + fmt("%.3f", strict.median_ratio) + ", weak median " +
              fmt("%.3f", weak.median_ratio)};
}

Outcome smooth_convergence() {
  const PiecewisePayoff f = payoffs::power_call4(100.0);
  const double vbs = bs_price_payoff_oracle(kMarket, f, 1e-12);
  const std::vector<int> ladder{200, 400, 800, 1600};
  std::map<int, double> values, errors;
  std::vector<double> scaled;
  double constant = 0.0;
  for (int n : ladder) {
    const SmoothEstimate est = smooth_estimate(kMarket, f, n, 0.3);
    values[n] = est.value;
    errors[n] = est.value - vbs;
    scaled.push_back(n * (est.value - vbs));
    constant = est.predicted_c;
  }
  std::map<int, double> top(std::next(errors.begin()), errors.end());
  const bool no_oscillation = !oscillates(top);

  bool diffs_decreasing = true;
  std::string diffs;
  double prev = INFINITY;
  for (std::size_t i = 1; i < scaled.size(); ++i) {
    const double d = std::abs(scaled[i] - scaled[i - 1]);
    diffs += (diffs.empty() ? "" : " ") + fmt("%.1f", d);
    diffs_decreasing = diffs_decreasing && d < prev;
    prev = d;
  }
  const double agreement = std::abs(scaled.back() / constant - 1.0);
  const RichardsonResult rich = richardson(values, 1.0);
  const double r_err = std::abs(rich.extrapolated.at(800) - vbs);
  const double top_err = std::abs(errors.at(1600));

  const bool pass = no_oscillation && diffs_decreasing && agreement <= 0.1 && r_err < top_err;
  std::string detail = std::string("no sign change on top rungs: ") + (no_oscillation ? "yes" : "NO");
  detail += "; |successive differences of n*error|: " + diffs + (diffs_decreasing ? " (decreasing)" : " (NOT decreasing)");
  detail += "; n*error/C at 1600: " + fmt("%.5f", scaled.back() / constant);
  detail += "; Richardson |error| " + fmt("%.4g", r_err) + " vs " + fmt("%.4g", top_err);
  return {pass, detail};
}

Outcome trapezoid_bound() {
  oracle::Gen gen(20240601);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.uniform(-3, 3), w = gen.uniform(0.3, 5), c = gen.uniform(-2, 2);
    const double b = gen.uniform(-1, 1), k = gen.uniform(0.1, 2);
    const auto g = [=](double x) { return a * std::cos(w * x + c) + b * std::exp(k * x) + 0.1 * x * x; };
    const auto g2 = [=](double x) { return -a * w * w * std::cos(w * x + c) + b * k * k * std::exp(k * x) + 0.2; };
    const auto primitive = [=](double x) { return a / w * std::sin(w * x + c) + b / k * std::exp(k * x) + x * x * x / 30; };
    const double exact = primitive(3.0) - primitive(0.0);
    double sup = 0.0;
    for (int i = 0; i <= 10000; ++i) sup = std::max(sup, std::abs(g2(3.0 * i / 10000)));
    sup *= 1.01;
    for (int n : {10, 100}) {
      const double err = std::abs(trapezoid(g, 3.0, n) - exact);
      const double bound = 27.0 / (12.0 * n * n) * sup;
      worst_ratio = std::max(worst_ratio, err / bound);
    }
  }
  return {worst_ratio <= 1.0, "max error/bound " + fmt("%.4f", worst_ratio)};
}

Outcome oracle_coherence() {
  double worst = 0.0;
  for (double k : {70.0, 90.0, 100.0, 110.0, 140.0}) {
    const double call = bs_call(kMarket, k);
    const double dig = bs_digital(kMarket, k);
    worst = std::max(worst, std::abs(bs_price_payoff_oracle(kMarket, payoffs::call(k), 1e-10) - call) / call);
    worst = std::max(worst, std::abs(bs_price_payoff_oracle(kMarket, payoffs::digital_geq(k), 1e-10) - dig) / dig);
  }
  return {worst <= 1e-8, "max relative gap " + fmt("%.2e", worst)};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "binconv_acceptance";
  std::filesystem::create_directories(dir);
  std::istringstream cfg_text(
      "payoff_id=butterfly:90,100,110\nscheme=tian\nn_ladder=50,100,200,400\nmode=expansion_check\n");
  const StudyConfig cfg = parse_config(cfg_text);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  write_csv_file(a.string(), run_study(cfg));
  write_csv_file(b.string(), run_study(cfg));
  const auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::string x = read(a), y = read(b);
  return {!x.empty() && x == y, std::to_string(x.size()) + " bytes, " + (x == y ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "representation formula exact on lattices", 10.0, lattice_exactness},
      {2, "call error O(1/n)", 5.0, call_rate},
      {3, "digital error O(1/sqrt n) with expansion residual O(n^-3/2)", 5.0, digital_rate},
      {4, "call expansion residual O(n^-3/2) at strikes 90, 100, 110", 10.0, call_expansion},
      {5, "Diener-Diener CRR call coefficient", 1.0, diener},
      {6, "node-aligned digital, strict and weak", 5.0, node_digital},
      {7, "smooth convergence of the centred composite estimator", 180.0, smooth_convergence},
      {8, "trapezoid error bound", 1.0, trapezoid_bound},
      {9, "quadrature oracle against closed forms", 1.0, oracle_coherence},
      {10, "byte-identical CSV on repeated runs", 1.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d: %s | %s | %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
