#include "offo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <tuple>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"

namespace offo {

namespace {

using nlohmann::json;

constexpr double kProfileSpan = 50.0;

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json report_json(const ProfileReport& r) {
  json j;
  j["noise"] = r.noise;
  j["instances"] = r.instances;
  j["unsolved_by_all"] = r.unsolved_by_all;
  j["summary"] = json::array();
  for (const MethodSummary& m : r.summary) {
    j["summary"].push_back({{"method", m.method}, {"pi", m.pi}, {"rho", m.rho}});
  }
  j["curves"] = json::array();
  for (const ProfileCurve& c : r.curves) {
    j["curves"].push_back({{"method", c.method}, {"t", c.t}, {"rho", c.rho}});
  }
  return j;
}

ProfileReport report_from(const json& j) {
  ProfileReport r;
  r.noise = j.at("noise").get<double>();
  r.instances = j.at("instances").get<Index>();
  r.unsolved_by_all = j.at("unsolved_by_all").get<Index>();
  for (const json& m : j.at("summary")) {
    r.summary.push_back({m.at("method").get<std::string>(), m.at("pi").get<double>(),
                         m.at("rho").get<double>()});
  }
  for (const json& c : j.at("curves")) {
    ProfileCurve curve;
    curve.method = c.at("method").get<std::string>();
    curve.t = c.at("t").get<std::vector<double>>();
    curve.rho = c.at("rho").get<std::vector<double>>();
    r.curves.push_back(std::move(curve));
  }
  return r;
}

}  // namespace

RunRecord run_one(const Method& method, const ProblemInstance& problem, double noise,
                  std::uint64_t seed, const BenchConfig& cfg) {
  RunRecord rec;
  rec.method = method.name;
  rec.problem = problem.name;
  rec.n = problem.n;
  rec.noise = noise;
  rec.seed = seed;
  try {
    IterationTrace trace;
    if (method.is_sdba) {
      SdbaConfig sc;
      sc.eps = cfg.eps;
      sc.max_iter = cfg.max_iter;
      sc.trace_level = TraceLevel::Summary;
      trace = sdba_run(problem, sc, noise, seed);
    } else {
      Astr1Config base;
      base.eps = cfg.eps;
      base.max_iter = cfg.max_iter;
      base.trace_level = TraceLevel::Summary;
      trace = astr1_run(problem, configure(method, base), noise, seed);
    }
    rec.status = trace.status;
    rec.iterations = trace.iterations;
    rec.final_normg = trace.final_normg;
    rec.value_calls = trace.value_calls;
    rec.gradient_calls = trace.gradient_calls;
    rec.hessian_calls = trace.hessian_calls;
    rec.evaluations = method.is_sdba ? trace.value_calls + trace.gradient_calls
                                     : static_cast<long>(trace.iterations);
  } catch (const std::exception& e) {
    rec.status = RunStatus::Failure;
    rec.error = e.what();
    rec.final_normg = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

std::vector<RunRecord> run_matrix(const std::vector<std::string>& methods,
                                  const std::vector<ProblemSpec>& problems,
                                  const std::vector<double>& noise_levels,
                                  const std::vector<std::uint64_t>& seeds,
                                  const BenchConfig& cfg) {
  if (seeds.empty()) throw DomainError("run_matrix needs at least one seed");
  std::vector<Method> ms;
  for (const std::string& name : methods) ms.push_back(make_method(name));
  std::vector<ProblemInstance> ps;
  for (const ProblemSpec& p : problems) ps.push_back(make_problem(p.name, p.n));

  struct Job {
    std::size_t m, p;
    double noise;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    for (std::size_t p = 0; p < ps.size(); ++p) {
      for (double noise : noise_levels) {
        for (std::uint64_t seed : seeds) jobs.push_back({m, p, noise, seed});
      }
    }
  }
  std::vector<RunRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      out[i] = run_one(ms[j.m], ps[j.p], j.noise, j.seed, cfg);
    }
  };
  unsigned count = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  count = static_cast<unsigned>(std::min<std::size_t>(count, std::max<std::size_t>(1, jobs.size())));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

std::vector<ProblemSpec> default_suite() {
  std::vector<ProblemSpec> out;
  for (const std::string& name : problem_names()) out.push_back({name, default_dimension(name)});
  return out;
}

double ProfileCurve::at(double tt) const {
  double v = 0.0;
  for (std::size_t i = 0; i < t.size() && t[i] <= tt; ++i) v = rho[i];
  return v;
}

bool ProfileReport::operator==(const ProfileReport& o) const {
  if (noise != o.noise || instances != o.instances || unsolved_by_all != o.unsolved_by_all ||
      summary.size() != o.summary.size() || curves.size() != o.curves.size()) {
    return false;
  }
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const MethodSummary &a = summary[i], &b = o.summary[i];
    if (a.method != b.method || a.pi != b.pi || a.rho != b.rho) return false;
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const ProfileCurve &a = curves[i], &b = o.curves[i];
    if (a.method != b.method || a.t != b.t || a.rho != b.rho) return false;
  }
  return true;
}

ProfileReport perf_profile(const std::vector<RunRecord>& records) {
  if (records.empty()) throw DomainError("performance profile of an empty record set");
  const double noise = records.front().noise;
  using Instance = std::tuple<std::string, Index, std::uint64_t>;
  std::set<std::string> method_set;
  std::set<Instance> instance_set;
  std::map<std::pair<std::string, Instance>, const RunRecord*> table;
  for (const RunRecord& r : records) {
    if (r.noise != noise) throw DomainError("performance profile over mixed noise levels");
    method_set.insert(r.method);
    Instance key{r.problem, r.n, r.seed};
    instance_set.insert(key);
    table[{r.method, key}] = &r;
  }

  ProfileReport rep;
  rep.noise = noise;
  rep.instances = static_cast<Index>(instance_set.size());
  const double N = static_cast<double>(rep.instances);

  // Costs below one are counted as one so that zero-iteration solves stay comparable.
  auto cost = [](const RunRecord& r) { return std::max(1.0, static_cast<double>(r.evaluations)); };
  std::map<std::string, std::vector<double>> ratios;
  for (const Instance& inst : instance_set) {
    double best = std::numeric_limits<double>::infinity();
    for (const std::string& m : method_set) {
      auto it = table.find({m, inst});
      if (it != table.end() && it->second->solved()) best = std::min(best, cost(*it->second));
    }
    if (!std::isfinite(best)) {
      ++rep.unsolved_by_all;
      continue;
    }
    for (const std::string& m : method_set) {
      auto it = table.find({m, inst});
      if (it != table.end() && it->second->solved()) ratios[m].push_back(cost(*it->second) / best);
    }
  }

  for (const std::string& m : method_set) {
    std::vector<double>& r = ratios[m];
    std::sort(r.begin(), r.end());
    MethodSummary s;
    s.method = m;
    s.rho = 100.0 * static_cast<double>(r.size()) / N;
    ProfileCurve c;
    c.method = m;
    double area = 0.0;
    Index within = 0;
    for (double q : r) {
      if (q > kProfileSpan) break;
      ++within;
      area += kProfileSpan - std::max(q, 1.0) + (q <= 1.0 ? 1.0 : 0.0);
    }
    s.pi = area / (kProfileSpan * N);
    Index count_at_1 = 0;
    while (count_at_1 < within && r[count_at_1] <= 1.0) ++count_at_1;
    c.t.push_back(1.0);
    c.rho.push_back(static_cast<double>(count_at_1) / N);
    for (Index i = count_at_1; i < within; ++i) {
      const double q = r[i];
      const double value = static_cast<double>(i + 1) / N;
      if (c.t.back() == q) {
        c.rho.back() = value;
      } else {
        c.t.push_back(q);
        c.rho.push_back(value);
      }
    }
    if (c.t.back() != kProfileSpan) {
      c.t.push_back(kProfileSpan);
      c.rho.push_back(c.rho.back());
    }
    rep.summary.push_back(s);
    rep.curves.push_back(std::move(c));
  }

  std::vector<std::size_t> order(rep.summary.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rep.summary[a].pi > rep.summary[b].pi;
  });
  ProfileReport sorted = rep;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.summary[i] = rep.summary[order[i]];
    sorted.curves[i] = rep.curves[order[i]];
  }
  return sorted;
}

std::string to_json(const ProfileReport& report) { return report_json(report).dump(2); }

ProfileReport profile_from_json(const std::string& text) { return report_from(json::parse(text)); }

std::string records_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "method,problem,n,noise,seed,status,iterations,evaluations,final_normg,value_calls,"
      "gradient_calls,hessian_calls\n";
  for (const RunRecord& r : records) {
    out += r.method + "," + r.problem + "," + std::to_string(r.n) + "," + fmt6(r.noise) + "," +
           std::to_string(r.seed) + "," + to_string(r.status) + "," +
           std::to_string(r.iterations) + "," + std::to_string(r.evaluations) + "," +
           fmt6(r.final_normg) + "," + std::to_string(r.value_calls) + "," +
           std::to_string(r.gradient_calls) + "," + std::to_string(r.hessian_calls) + "\n";
  }
  return out;
}

std::string profile_csv(const ProfileReport& report) {
  std::string out = "method,t,rho\n";
  for (const ProfileCurve& c : report.curves) {
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      out += c.method + "," + fmt6(c.t[i]) + "," + fmt6(c.rho[i]) + "\n";
    }
  }
  return out;
}

std::string aggregate_csv(const ProfileReport& report) {
  std::string out = "method,pi,rho\n";
  for (const MethodSummary& m : report.summary) {
    out += m.method + "," + fmt6(m.pi) + "," + fmt6(m.rho) + "\n";
  }
  return out;
}

void emit(const std::vector<RunRecord>& records, const std::vector<ProfileReport>& reports,
          const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  write_file(root / "records.csv", records_csv(records));
  json all = json::array();
  for (const ProfileReport& r : reports) {
    const std::string suffix = reports.size() == 1 ? "" : "_" + fmt6(r.noise);
    write_file(root / ("profile" + suffix + ".csv"), profile_csv(r));
    write_file(root / ("aggregate" + suffix + ".csv"), aggregate_csv(r));
    all.push_back(report_json(r));
  }
  write_file(root / "aggregate.json", (reports.size() == 1 ? all[0] : all).dump(2) + "\n");
}

}  // namespace offo
