#pragma once

#include <optional>

#include "offo/solver.hpp"

namespace offo {

/// Sums in the series lemma: lhs = sum_j a_j / (xi + b_j)^alpha with b_j the prefix sums.
struct SeriesBound {
  double lhs = 0.0;
  double rhs = 0.0;
  /// (xi + b_k)^(1-alpha) / (1-alpha) for alpha < 1, xi^(1-alpha) / (alpha-1) for alpha > 1.
  std::optional<double> majorant;
};

/// Throws DomainError unless xi > 0, alpha > 0 and a is finite and non-negative.
SeriesBound series_bound(const VectorXd& a, double xi, double alpha);

/// Lower branch W_{-1} of the Lambert function on [-1/e, 0). Returns w <= -1.
double lambert_w_m1(double x);

/// W_{-1}(x) from l = log(-x) <= -1, for arguments too small to represent directly.
double lambert_w_m1_log(double log_minus_x);

/// Problem and algorithm constants entering the complexity bounds.
struct TheoryParams {
  std::optional<double> L;  ///< gradient Lipschitz constant
  double Gamma0 = 0.0;      ///< f(x0) - f_low
  Index n = 1;
  double tau = 0.1;
  double kappa_B = 1.0;
  double theta = 1.0;
  double vartheta = 1.0;
  double sigma = 0.01;

  double lipschitz() const;  ///< throws CapabilityError when L is unknown
};

/// Constants for an Adagrad-like run with exponent mu: kappa_1 (mu < 1/2), kappa_2 (mu = 1/2)
/// or kappa_3 (mu > 1/2). mu must lie in [0.01, 0.99]. May return +inf when a term overflows.
double kappa_constants(const TheoryParams& p, double mu);

/// The Lambert-W term of kappa_2 on its own.
double kappa2_lambert_term(const TheoryParams& p);

/// Builds parameters from a problem whose Lipschitz constant is exact.
/// For runs with B = 0 the bound ||B|| <= 1 holds, so kappa_B is reported as 1.
TheoryParams theory_params(const ProblemInstance& problem, const Astr1Config& cfg);

struct EnvelopeReport {
  double kappa = 0.0;
  double max_ratio = 0.0;  ///< max_k sum_{j<=k} ||g_j||^2 / kappa
  Index worst_k = 0;
  Index checked = 0;
  bool ok() const { return max_ratio <= 1.0; }
};

EnvelopeReport envelope_check(const IterationTrace& trace, double kappa);

/// Iteration beyond which the bracket tau sigma_min - kappa_B (kappa_B + L) / w_min,j exceeds eta
/// for weights growing at least like theta sigma_min j^nu. Requires 0 < eta < tau sigma_min.
double ming_threshold(const TheoryParams& p, double sigma_min, double eta, double nu);

struct MingReport {
  double j_eta = 0.0;
  bool vacuous = false;  ///< no recorded iteration beyond j_eta
  Index checked = 0;
  Index violations = 0;
  double min_bracket = 0.0;  ///< smallest bracket over checked iterations
};

MingReport ming_check(const IterationTrace& trace, const TheoryParams& p, double sigma_min,
                      double eta, double nu);

struct DecreaseReport {
  double max_violation = 0.0;
  Index worst_k = 0;
  Index checked = 0;
};

/// Checks f(x_{j+1}) <= f(x_j) - tau sigma_min/(2 kappa_B) sum g^2/w + (kappa_B+L)/2 sum g^2/w^2
/// on an instrumented trace. Returns the largest positive excess.
DecreaseReport decrease_check(const IterationTrace& trace, const TheoryParams& p,
                              double sigma_min);

/// The sigma_min used by the decrease inequality: the rule's weight floor, capped at 1.
double decrease_sigma_min(const ScalingRule& rule, Index n);

}  // namespace offo
