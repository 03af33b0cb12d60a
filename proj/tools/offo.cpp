#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "offo/bench.hpp"
#include "offo/sharpness.hpp"
#include "offo/suites.hpp"
#include "offo/variants.hpp"

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace(const std::string& path, const offo::IterationTrace& trace, bool with_f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "k,normg," << (with_f ? "f," : "") << "delta_min,delta_max,gamma,status\n";
  for (const offo::IterationRecord& r : trace.records) {
    out << r.k << ',' << g17(r.normg) << ',';
    if (with_f) out << g17(r.f) << ',';
    out << g17(r.delta_min) << ',' << g17(r.delta_max) << ',' << g17(r.gamma) << ','
        << (r.terminal ? offo::to_string(trace.status) : "running") << '\n';
  }
}

int cmd_run(const std::string& problem_name, offo::Index n, const std::string& method_name,
            const std::string& geometry, double eps, offo::Index max_iter, double noise,
            std::uint64_t seed, bool instrument, const std::string& trace_path) {
  const offo::ProblemInstance p =
      n > 0 ? offo::make_problem(problem_name, n) : offo::make_problem(problem_name);
  const offo::Method m = offo::make_method(method_name);
  offo::IterationTrace t;
  if (m.is_sdba) {
    offo::SdbaConfig cfg;
    cfg.eps = eps;
    cfg.max_iter = max_iter;
    t = offo::sdba_run(p, cfg, noise, seed);
  } else {
    offo::Astr1Config cfg;
    cfg.eps = eps;
    cfg.max_iter = max_iter;
    cfg.instrument_f = instrument;
    cfg = offo::configure(m, cfg);
    if (!geometry.empty()) cfg.geometry = offo::parse_geometry(geometry);
    t = offo::astr1_run(p, cfg, noise, seed);
  }
  std::printf("problem %s n=%ld method %s\n", p.name.c_str(), static_cast<long>(p.n),
              m.name.c_str());
  std::printf("status %s iterations %ld final_normg %.6g\n", offo::to_string(t.status).c_str(),
              static_cast<long>(t.iterations), t.final_normg);
  std::printf("calls f=%ld g=%ld H=%ld instrument=%ld\n", t.value_calls, t.gradient_calls,
              t.hessian_calls, t.instrument_calls);
  if (!trace_path.empty()) write_trace(trace_path, t, instrument || m.is_sdba);
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites, const std::string& report_path) {
  std::vector<std::string> names = suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = offo::suite_names();
  bool all_ok = true;
  std::string combined = "[\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const offo::SuiteResult r = offo::run_suite(names[i]);
    all_ok = all_ok && r.passed;
    std::printf("%-9s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.summary.c_str());
    combined += r.report + (i + 1 < names.size() ? ",\n" : "\n");
  }
  combined += "]\n";
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot open " + report_path);
    out << combined;
  }
  return all_ok ? 0 : 1;
}

int cmd_sharpness(const std::string& kind, const offo::SharpParams& params, offo::Index iters,
                  const std::string& out_path, bool do_replay) {
  offo::SharpKind k;
  if (kind == "thm31") {
    k = offo::SharpKind::Thm31;
  } else if (kind == "thm41") {
    k = offo::SharpKind::Thm41;
  } else {
    throw offo::CatalogError("unknown kind: " + kind + " (thm31|thm41)");
  }
  const offo::SharpSequence seq = offo::build_sequence(k, params, iters);
  const offo::Admissibility adm = offo::admissibility(seq);
  std::printf("f0 %.12g kappa_f %.6g value_margin %.6g slope_margin %.6g\n", seq.f0,
              seq.kappa_f, adm.value_margin, adm.slope_margin);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << "k,x,f,g\n";
    for (offo::Index i = 0; i <= seq.K; ++i) {
      out << i << ',' << g17(seq.x(i)) << ',' << g17(seq.f(i)) << ',' << g17(seq.g(i)) << '\n';
    }
  }
  if (do_replay) {
    const offo::HermiteInterpolant interp = offo::hermite_build(seq);
    const offo::ReplayReport rep = offo::replay(seq, interp);
    std::printf("replay %s max_x_dev %.3g max_g_dev %.3g first_divergent %ld\n",
                rep.ok() ? "matched" : "diverged", rep.max_x_deviation, rep.max_g_deviation,
                static_cast<long>(rep.first_divergent));
    return rep.ok() ? 0 : 1;
  }
  return 0;
}

std::vector<offo::ProblemSpec> parse_problems(const std::string& text) {
  if (text == "all") return offo::default_suite();
  std::vector<offo::ProblemSpec> out;
  for (const std::string& item : split(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back({item, offo::default_dimension(item)});
    } else {
      out.push_back({item.substr(0, colon), std::stol(item.substr(colon + 1))});
    }
  }
  return out;
}

int cmd_bench(const std::string& methods, const std::string& problems, const std::string& noise,
              unsigned seeds, double eps, offo::Index max_iter, unsigned workers,
              const std::string& out_dir) {
  std::vector<double> levels;
  for (const std::string& s : split(noise)) levels.push_back(std::stod(s));
  std::vector<std::uint64_t> seed_list;
  for (unsigned s = 0; s < std::max(1u, seeds); ++s) seed_list.push_back(s);
  offo::BenchConfig cfg;
  cfg.eps = eps;
  cfg.max_iter = max_iter;
  cfg.workers = workers;
  const std::vector<offo::RunRecord> records = offo::run_matrix(
      methods == "all" ? offo::method_names() : split(methods), parse_problems(problems), levels,
      seed_list, cfg);
  std::vector<offo::ProfileReport> reports;
  for (double level : levels) {
    std::vector<offo::RunRecord> subset;
    for (const offo::RunRecord& r : records) {
      if (r.noise == level) subset.push_back(r);
    }
    reports.push_back(offo::perf_profile(subset));
  }
  for (const offo::ProfileReport& rep : reports) {
    std::printf("noise %g: %ld instances, %ld unsolved by every method\n", rep.noise,
                static_cast<long>(rep.instances), static_cast<long>(rep.unsolved_by_all));
    for (const offo::MethodSummary& m : rep.summary) {
      std::printf("  %-12s pi %.2f rho %.2f\n", m.method.c_str(), m.pi, m.rho);
    }
  }
  if (!out_dir.empty()) offo::emit(records, reports, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Objective-function-free trust-region optimization"};
  app.require_subcommand(1);

  std::string problem = "rosenbr", method = "adagrad", geometry, trace_path;
  offo::Index n = 0, max_iter = 100000;
  double eps = 1e-6, noise = 0.0;
  std::uint64_t seed = 0;
  bool instrument = false;
  CLI::App* run = app.add_subcommand("run", "Run one method on one problem");
  run->add_option("--problem", problem, "Problem name")->capture_default_str();
  run->add_option("--n", n, "Dimension (default: the family's default)");
  run->add_option("--method", method, "Variant name")->capture_default_str();
  run->add_option("--geometry", geometry, "Override trust-region geometry: box|ball");
  run->add_option("--eps", eps, "Gradient tolerance")->capture_default_str();
  run->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  run->add_option("--noise", noise, "Relative gradient noise level")->capture_default_str();
  run->add_option("--seed", seed, "Noise seed")->capture_default_str();
  run->add_flag("--instrument-f", instrument, "Record f(x_k) in the trace");
  run->add_option("--trace", trace_path, "Write the per-iteration trace as CSV");

  std::vector<std::string> suites;
  std::string report_path;
  CLI::App* verify = app.add_subcommand("verify", "Run numerical verification suites");
  verify->add_option("--suite", suites, "series|lambert|envelope|decrease|ming|all")
      ->delimiter(',');
  verify->add_option("--report", report_path, "Write the JSON report here");

  std::string kind = "thm31", seq_out;
  offo::SharpParams sp;
  offo::Index iters = 10000;
  bool do_replay = false;
  CLI::App* sharp = app.add_subcommand("sharpness", "Build a slow-convergence example");
  sharp->add_option("--kind", kind, "thm31|thm41")->capture_default_str();
  sharp->add_option("--mu", sp.mu, "Adagrad exponent (thm31)")->capture_default_str();
  sharp->add_option("--eta", sp.eta, "Gradient decay offset (thm31)")->capture_default_str();
  sharp->add_option("--sigma", sp.sigma, "Weight floor")->capture_default_str();
  sharp->add_option("--nu", sp.nu, "Weight growth power (thm41)")->capture_default_str();
  sharp->add_option("--omega", sp.omega, "Gradient decay power (thm41)")->capture_default_str();
  sharp->add_option("--iters", iters, "Number of iterations K")->capture_default_str();
  sharp->add_option("--out", seq_out, "Write (k, x_k, f_k, g_k) as CSV");
  sharp->add_flag("--replay", do_replay, "Replay ASTR1 on the interpolant and compare");

  std::string methods = "adagrad,adagnorm,maxg,sdba", problems = "all", noise_list = "0",
              out_dir;
  unsigned seeds = 1, workers = 0;
  double bench_eps = 1e-6;
  offo::Index bench_max_iter = 100000;
  CLI::App* bench = app.add_subcommand("bench", "Run a method x problem x noise matrix");
  bench->add_option("--methods", methods, "Comma list of variants, or all")->capture_default_str();
  bench->add_option("--problems", problems, "all, or a comma list of name[:n]")
      ->capture_default_str();
  bench->add_option("--noise", noise_list, "Comma list of noise levels")->capture_default_str();
  bench->add_option("--seeds", seeds, "Seeds per noise level")->capture_default_str();
  bench->add_option("--eps", bench_eps, "Gradient tolerance")->capture_default_str();
  bench->add_option("--max-iter", bench_max_iter, "Iteration cap")->capture_default_str();
  bench->add_option("--workers", workers, "Worker threads (0: all cores)");
  bench->add_option("--out", out_dir, "Output directory for CSV/JSON");

  std::string pname;
  offo::Index pn = 0;
  bool list = false;
  CLI::App* prob = app.add_subcommand("problem", "Describe a catalog problem");
  prob->add_option("--name", pname, "Problem name");
  prob->add_option("--n", pn, "Dimension");
  prob->add_flag("--list", list, "List problem and method names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return cmd_run(problem, n, method, geometry, eps, max_iter, noise, seed, instrument,
                     trace_path);
    }
    if (*verify) return cmd_verify(suites, report_path);
    if (*sharp) return cmd_sharpness(kind, sp, iters, seq_out, do_replay);
    if (*bench) {
      return cmd_bench(methods, problems, noise_list, seeds, bench_eps, bench_max_iter, workers,
                       out_dir);
    }
    if (*prob) {
      if (list || pname.empty()) {
        std::printf("problems:");
        for (const std::string& s : offo::problem_names()) std::printf(" %s", s.c_str());
        std::printf("\nmethods:");
        for (const std::string& s : offo::method_names()) std::printf(" %s", s.c_str());
        std::printf("\n");
        return 0;
      }
      const offo::ProblemInstance p =
          pn > 0 ? offo::make_problem(pname, pn) : offo::make_problem(pname);
      std::cout << offo::problem_to_json(p) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
