#include "offo/suites.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "offo/theory.hpp"
#include "offo/variants.hpp"

namespace offo {

namespace {

using nlohmann::json;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

SuiteResult finish(const std::string& name, bool passed, std::string summary, json j) {
  j["suite"] = name;
  j["passed"] = passed;
  return {name, passed, std::move(summary), j.dump(2)};
}

SuiteResult series_suite() {
  const std::vector<double> alphas = {0.3, 0.7, 1.0, 1.3, 2.0};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> length(1, 40);
  double worst = 0.0;
  long cases = 0, failures = 0, majorant_failures = 0;
  for (int c = 0; c < 1000; ++c) {
    VectorXd a(length(rng));
    // Mix of scales, with exact zeros, so both tiny and dominant terms occur.
    const double scale = std::pow(10.0, 6.0 * unit(rng) - 3.0);
    for (Index j = 0; j < a.size(); ++j) a(j) = unit(rng) < 0.2 ? 0.0 : scale * unit(rng);
    const double xi = std::pow(10.0, 4.0 * unit(rng) - 2.0);
    for (double alpha : alphas) {
      const SeriesBound b = series_bound(a, xi, alpha);
      ++cases;
      const double ratio = b.rhs > 0.0 ? b.lhs / b.rhs : (b.lhs > 0.0 ? INFINITY : 0.0);
      worst = std::max(worst, ratio);
      if (b.lhs > b.rhs * (1.0 + 1e-12)) ++failures;
      if (b.majorant && b.rhs > *b.majorant * (1.0 + 1e-12)) ++majorant_failures;
    }
  }
  // Continuity of the bound at alpha = 1.
  double worst_gap = 0.0;
  std::mt19937_64 rng2(99);
  for (int c = 0; c < 200; ++c) {
    VectorXd a(20);
    for (Index j = 0; j < a.size(); ++j) a(j) = 5.0 * unit(rng2);
    const double xi = 0.01 + unit(rng2);
    const double mid = series_bound(a, xi, 1.0).rhs;
    for (double d : {-1e-6, 1e-6}) {
      worst_gap = std::max(worst_gap, std::abs(series_bound(a, xi, 1.0 + d).rhs - mid) / mid);
    }
  }
  const bool ok = failures == 0 && majorant_failures == 0 && worst_gap <= 1e-4;
  json j{{"cases", cases},
         {"failures", failures},
         {"majorant_failures", majorant_failures},
         {"max_lhs_over_rhs", worst},
         {"max_relative_gap_at_alpha_1", worst_gap}};
  return finish("series", ok,
                std::to_string(cases) + " cases, " + std::to_string(failures) +
                    " failures, " + fmt("max lhs/rhs %.6g, continuity gap %.3g", worst, worst_gap),
                j);
}

SuiteResult lambert_suite() {
  const double branch = -std::exp(-1.0);
  const double lo = branch + 1e-9, hi = -1e-12;
  double worst_residual = 0.0;
  long points = 0;
  auto check = [&](double x) {
    const double w = lambert_w_m1(x);
    worst_residual = std::max(worst_residual, std::abs(w * std::exp(w) - x) / std::abs(x));
    ++points;
  };
  for (int i = 0; i < 500; ++i) check(lo + (hi - lo) * i / 499.0);
  for (int i = 0; i < 500; ++i) {
    check(-std::exp(std::log(-hi) + (std::log(-lo) - std::log(-hi)) * i / 499.0));
  }
  const double at_branch = lambert_w_m1(branch);
  double worst_bound = -INFINITY;
  long bound_points = 0;
  for (int i = 0; i < 601; ++i) {
    const double x = std::pow(10.0, -3.0 + 6.0 * i / 600.0);
    const double w = lambert_w_m1_log(-x - 1.0);
    worst_bound = std::max(worst_bound, std::abs(w) - (1.0 + std::sqrt(2.0 * x) + x));
    ++bound_points;
  }
  const bool ok = worst_residual <= 1e-12 && std::abs(at_branch + 1.0) <= 1e-8 && worst_bound <= 0.0;
  json j{{"grid_points", points},
         {"max_relative_residual", worst_residual},
         {"w_at_branch_point", at_branch},
         {"bound_points", bound_points},
         {"max_bound_excess", worst_bound}};
  return finish("lambert", ok,
                fmt("max residual %.3g, bound excess %.3g", worst_residual, worst_bound), j);
}

struct ExactCase {
  ProblemInstance problem;
  Astr1Config cfg;
};

Astr1Config adagrad_config() {
  Astr1Config cfg = configure(make_method("adagrad"));
  cfg.trace_level = TraceLevel::Scalars;
  return cfg;
}

SuiteResult envelope_suite() {
  json rows = json::array();
  bool ok = true;
  for (const std::string& name : exact_lipschitz_problem_names()) {
    const ProblemInstance p = make_problem(name);
    const Astr1Config cfg = adagrad_config();
    const IterationTrace t = astr1_run(p, cfg);
    const TheoryParams tp = theory_params(p, cfg);
    const double kappa = kappa_constants(tp, 0.5);
    const EnvelopeReport r = envelope_check(t, kappa);
    ok = ok && r.ok();
    rows.push_back({{"problem", name}, {"n", p.n}, {"L", *tp.L}, {"Gamma0", tp.Gamma0},
                    {"kappa2", kappa}, {"status", to_string(t.status)},
                    {"iterations", t.iterations}, {"max_ratio", r.max_ratio},
                    {"asserted", true}});
  }
  // Problems with a sampled L are reported only.
  for (const char* name : {"rosenbr", "beale"}) {
    const ProblemInstance p = make_problem(name);
    const Astr1Config cfg = adagrad_config();
    const IterationTrace t = astr1_run(p, cfg);
    TheoryParams tp;
    tp.L = p.lipschitz_hint;
    tp.Gamma0 = p.value(p.x0) - p.f_low;
    tp.n = p.n;
    const double kappa = kappa_constants(tp, 0.5);
    rows.push_back({{"problem", name}, {"n", p.n}, {"L", *tp.L}, {"Gamma0", tp.Gamma0},
                    {"kappa2", kappa}, {"status", to_string(t.status)},
                    {"iterations", t.iterations},
                    {"max_ratio", envelope_check(t, kappa).max_ratio}, {"asserted", false}});
  }
  return finish("envelope", ok, ok ? "all asserted ratios <= 1" : "an asserted ratio exceeds 1",
                json{{"runs", rows}});
}

SuiteResult decrease_suite() {
  json rows = json::array();
  double worst = 0.0;
  for (const std::string& name : exact_lipschitz_problem_names()) {
    const ProblemInstance p = make_problem(name);
    for (const char* method : {"adagrad", "adam", "maxg", "avgg", "adagrads",
                                      "adagbfgs3", "adagH"}) {
      Astr1Config cfg = configure(make_method(method));
      cfg.instrument_f = true;
      const IterationTrace t = astr1_run(p, cfg);
      const TheoryParams tp = theory_params(p, cfg);
      const DecreaseReport r =
          decrease_check(t, tp, decrease_sigma_min(cfg.scaling, p.n));
      worst = std::max(worst, r.max_violation);
      rows.push_back({{"problem", name}, {"method", method}, {"status", to_string(t.status)},
                      {"iterations", t.iterations}, {"checked", r.checked},
                      {"max_violation", r.max_violation}});
    }
  }
  const bool ok = worst <= 1e-8;
  return finish("decrease", ok, fmt("max violation %.3g", worst),
                json{{"runs", rows}, {"max_violation", worst}});
}

SuiteResult ming_suite() {
  json rows = json::array();
  bool ok = true;
  // Default maxg constants: the threshold is astronomically large, so the check is vacuous.
  for (const std::string& name : exact_lipschitz_problem_names()) {
    const ProblemInstance p = make_problem(name);
    const Astr1Config cfg = configure(make_method("maxg"));
    const IterationTrace t = astr1_run(p, cfg);
    const TheoryParams tp = theory_params(p, cfg);
    const double smin = decrease_sigma_min(cfg.scaling, p.n);
    const double eta = 0.5 * tp.tau * smin;
    const MingReport r = ming_check(t, tp, smin, eta, cfg.scaling.nu);
    ok = ok && r.violations == 0;
    rows.push_back({{"problem", name}, {"sigma", cfg.scaling.sigma}, {"tau", cfg.tau},
                    {"nu", cfg.scaling.nu}, {"eta", eta}, {"j_eta", r.j_eta},
                    {"iterations", t.iterations}, {"vacuous", r.vacuous},
                    {"checked", r.checked}, {"violations", r.violations}});
  }
  // Constants chosen so that j_eta is reachable: sigma = tau = 1, nu = 1/2.
  for (const std::string& name : exact_lipschitz_problem_names()) {
    const ProblemInstance p = make_problem(name);
    Astr1Config cfg = configure(make_method("maxg"));
    cfg.tau = 1.0;
    cfg.scaling.sigma = 1.0;
    cfg.scaling.nu = 0.5;
    cfg.eps = 0.0;
    TheoryParams tp = theory_params(p, cfg);
    const double smin = decrease_sigma_min(cfg.scaling, p.n);
    const double eta = 0.5;
    const double j_eta = ming_threshold(tp, smin, eta, cfg.scaling.nu);
    cfg.max_iter = static_cast<Index>(std::ceil(j_eta)) + 200;
    const IterationTrace t = astr1_run(p, cfg);
    const MingReport r = ming_check(t, tp, smin, eta, cfg.scaling.nu);
    ok = ok && r.violations == 0 && !r.vacuous;
    rows.push_back({{"problem", name}, {"sigma", 1.0}, {"tau", 1.0}, {"nu", 0.5},
                    {"eta", eta}, {"j_eta", r.j_eta}, {"iterations", t.iterations},
                    {"vacuous", r.vacuous}, {"checked", r.checked},
                    {"violations", r.violations}, {"min_bracket", r.min_bracket}});
  }
  return finish("ming", ok, ok ? "bracket exceeds eta beyond j_eta everywhere" : "violation",
                json{{"runs", rows},
                     {"note", "only the computable threshold is checked; the subsequence bound "
                              "is not constructive"}});
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"series", "lambert", "envelope", "decrease",
                                                 "ming"};
  return names;
}

SuiteResult run_suite(const std::string& name) {
  if (name == "series") return series_suite();
  if (name == "lambert") return lambert_suite();
  if (name == "envelope") return envelope_suite();
  if (name == "decrease") return decrease_suite();
  if (name == "ming") return ming_suite();
  throw CatalogError("unknown suite: " + name);
}

}  // namespace offo
