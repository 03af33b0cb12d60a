#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "offo/variants.hpp"

namespace offo {

struct ProblemSpec {
  std::string name;
  Index n = 0;
};

struct BenchConfig {
  double eps = 1e-6;
  Index max_iter = 100000;
  unsigned workers = 0;  ///< 0: hardware concurrency
};

struct RunRecord {
  std::string method;
  std::string problem;
  Index n = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::Failure;
  Index iterations = 0;
  /// Profile cost: iterations for derivative-only methods, f plus g evaluations for sdba.
  long evaluations = 0;
  double final_normg = 0.0;
  long value_calls = 0;
  long gradient_calls = 0;
  long hessian_calls = 0;
  std::string error;  ///< set when the run could not start (unsupported problem, ...)

  bool solved() const { return status == RunStatus::Converged; }
};

RunRecord run_one(const Method& method, const ProblemInstance& problem, double noise,
                  std::uint64_t seed, const BenchConfig& cfg);

/// One record per (method, problem, noise, seed), in that nesting order whatever the
/// number of workers. Failures are recorded, never thrown.
std::vector<RunRecord> run_matrix(const std::vector<std::string>& methods,
                                  const std::vector<ProblemSpec>& problems,
                                  const std::vector<double>& noise_levels,
                                  const std::vector<std::uint64_t>& seeds,
                                  const BenchConfig& cfg);

/// Every catalog problem at its default dimension.
std::vector<ProblemSpec> default_suite();

/// Step function rho_m(t): fraction of instances solved within t times the best cost.
struct ProfileCurve {
  std::string method;
  std::vector<double> t;    ///< 1, the sorted ratios in (1, 50], then 50
  std::vector<double> rho;  ///< rho_m at each t (right-continuous)
  double at(double t) const;
};

struct MethodSummary {
  std::string method;
  double pi = 0.0;   ///< area below rho_m on [0, 50] / 50, with rho_m = rho_m(1) on [0, 1]
  double rho = 0.0;  ///< percentage of solved instances
};

struct ProfileReport {
  double noise = 0.0;
  Index instances = 0;       ///< (problem, seed) pairs
  Index unsolved_by_all = 0;
  std::vector<MethodSummary> summary;  ///< sorted by pi descending
  std::vector<ProfileCurve> curves;    ///< same order as summary

  bool operator==(const ProfileReport& other) const;
};

/// Performance profile over records sharing one noise level.
/// Throws DomainError for an empty set or mixed noise levels.
ProfileReport perf_profile(const std::vector<RunRecord>& records);

std::string to_json(const ProfileReport& report);
ProfileReport profile_from_json(const std::string& text);

std::string records_csv(const std::vector<RunRecord>& records);
std::string profile_csv(const ProfileReport& report);
std::string aggregate_csv(const ProfileReport& report);

/// Writes records.csv, profile.csv, aggregate.csv and aggregate.json into `dir`.
/// With several reports (one per noise level) the profile and aggregate CSVs are written once per
/// level as profile_<noise>.csv and aggregate_<noise>.csv; aggregate.json holds them all.
void emit(const std::vector<RunRecord>& records, const std::vector<ProfileReport>& reports,
          const std::string& dir);

}  // namespace offo
