#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "offo/model.hpp"
#include "offo/noise.hpp"
#include "offo/scaling.hpp"

namespace offo {

enum class Geometry { Box, Ball };

enum class RunStatus { Converged, MaxIter, Overflow, Failure };

/// How much of each iteration is kept in the trace.
enum class TraceLevel {
  Summary,  ///< final status and online aggregates only
  Scalars,  ///< one scalar record per iteration
  Full      ///< scalar records plus x, g, w, radii and step vectors
};

struct Astr1Config {
  double tau = 0.1;
  double kappa_B = 1e5;
  Geometry geometry = Geometry::Box;
  ScalingRule scaling;
  ModelKind model = ModelKind::Zero;
  Index lbfgs_memory = 3;
  double eps = 1e-6;
  Index max_iter = 100000;
  double cg_rel = 1e-5;
  double cg_abs = 1e-12;
  bool instrument_f = false;  ///< records f(x_k); never read by the iteration
  TraceLevel trace_level = TraceLevel::Scalars;
};

/// Throws DomainError on out-of-range parameters or Ball geometry without aggregation.
void validate(const Astr1Config& cfg);

/// Per-coordinate radii |g_i| / w_i, plus the Euclidean radius ||g|| / w for Ball geometry.
struct Radii {
  Geometry geometry = Geometry::Box;
  VectorXd per_coordinate;
  double ball = std::numeric_limits<double>::quiet_NaN();
};

template <typename DerivedG, typename DerivedW>
Radii trust_radius(const Eigen::MatrixBase<DerivedG>& g, const Eigen::MatrixBase<DerivedW>& w,
                   Geometry geometry) {
  Radii r;
  r.geometry = geometry;
  r.per_coordinate = g.cwiseAbs().cwiseQuotient(w);
  if (geometry == Geometry::Ball) {
    if (w.size() > 0 && w.maxCoeff() != w.minCoeff()) {
      throw DomainError("ball geometry needs one shared weight");
    }
    r.ball = w.size() > 0 ? g.norm() / w(0) : 0.0;
  }
  return r;
}

/// The generalized Cauchy point along s_L = -sign(g) Delta.
struct CauchyStep {
  VectorXd s_L;
  double gamma = 1.0;
  VectorXd s_Q;
  double q_Q = 0.0;
  double curvature = 0.0;  ///< s_L' B s_L
};

/// g's + s'Bs/2.
double model_value(const VectorXd& g, const HessianModel& model, const VectorXd& s);

CauchyStep cauchy_step(const VectorXd& g, const HessianModel& model, const Radii& radii);

struct SubproblemResult {
  VectorXd s;
  double q = 0.0;
  bool used_cauchy_fallback = false;
  int cg_iterations = 0;
};

/// Approximate model minimizer inside the trust region. Box uses projected truncated CG,
/// Ball uses Steihaug-Toint CG. Any result failing q(s) <= tau q(s_Q) is replaced by s_Q.
SubproblemResult solve_subproblem(const VectorXd& g, const HessianModel& model,
                                  const Radii& radii, const CauchyStep& cauchy,
                                  const Astr1Config& cfg);

SubproblemResult solve_subproblem(const VectorXd& g, const HessianModel& model,
                                  const Radii& radii, const Astr1Config& cfg);

struct IterationRecord {
  Index k = 0;
  double normg = 0.0;
  double f = std::numeric_limits<double>::quiet_NaN();
  double delta_min = 0.0;
  double delta_max = 0.0;
  double gamma = 1.0;
  double q_step = 0.0;     ///< q(s_k)
  double q_cauchy = 0.0;   ///< q(s_k^Q)
  double step_excess = 0.0;   ///< max (|s_i| - Delta_i)/(1 + Delta_i), or the Ball analogue
  double gcp_residual = 0.0;  ///< (q(s) - tau q(s_Q)) / max(1, |q(s_Q)|)
  double sum_g2_over_w = 0.0;
  double sum_g2_over_w2 = 0.0;
  double w_min = 0.0;
  bool terminal = false;  ///< final record: no step was taken
  // TraceLevel::Full only
  VectorXd x, g, w, delta, s;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::MaxIter;
  Index iterations = 0;
  double final_normg = std::numeric_limits<double>::quiet_NaN();
  VectorXd x_final;
  long value_calls = 0;
  long gradient_calls = 0;
  long hessian_calls = 0;
  long instrument_calls = 0;
  double max_step_excess = -std::numeric_limits<double>::infinity();
  double max_gcp_residual = -std::numeric_limits<double>::infinity();
  double max_q_cauchy = -std::numeric_limits<double>::infinity();
  long cauchy_fallbacks = 0;
};

/// ASTR1 on a problem, optionally with relative gradient/Hessian noise.
IterationTrace astr1_run(const ProblemInstance& problem, const Astr1Config& cfg,
                         double noise_level = 0.0, std::uint64_t seed = 0);

/// ASTR1 against a caller-owned oracle (its counters reflect the run afterwards).
IterationTrace astr1_run(Oracle& oracle, const Astr1Config& cfg);

struct SdbaConfig {
  double eps = 1e-6;
  Index max_iter = 100000;
  double c1 = 1e-4;
  int max_backtracks = 50;
  TraceLevel trace_level = TraceLevel::Scalars;
};

/// Steepest descent with Armijo backtracking; the only method here that evaluates f.
IterationTrace sdba_run(const ProblemInstance& problem, const SdbaConfig& cfg,
                        double noise_level = 0.0, std::uint64_t seed = 0);
IterationTrace sdba_run(Oracle& oracle, const SdbaConfig& cfg);

std::string to_string(RunStatus status);
std::string to_string(Geometry geometry);
Geometry parse_geometry(const std::string& name);

}  // namespace offo
