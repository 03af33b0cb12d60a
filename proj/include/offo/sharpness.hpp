#pragma once

#include "offo/solver.hpp"

namespace offo {

/// Riemann zeta for s > 1, by direct summation with an Euler-Maclaurin tail.
double riemann_zeta(double s);

/// Which lower-bound construction: Adagrad-like weights with gradients k^-(1/2+eta),
/// or diminishing max weights (k+1)^nu with gradients (k+1)^-omega.
enum class SharpKind { Thm31, Thm41 };

struct SharpParams {
  double mu = 0.5;      ///< Thm31
  double eta = 0.01;    ///< Thm31
  double sigma = 0.01;
  double nu = 1.0 / 9.0;               ///< Thm41
  double omega = 4.0 / 9.0 + 0.01;     ///< Thm41
};

/// Prescribed iterates of a one-dimensional slow run. g, x, f have K+1 entries, s and w have K.
struct SharpSequence {
  SharpKind kind = SharpKind::Thm31;
  SharpParams params;
  Index K = 0;
  VectorXd g, s, x, f, w;
  double f0 = 0.0;
  double kappa_f = 0.0;
};

/// Throws DomainError when the parameters are outside the construction's range.
SharpSequence build_sequence(SharpKind kind, const SharpParams& params, Index K);

/// Margins of |f_{k+1}-f_k-g_k s_k| <= kappa_f s_k^2 and |g_{k+1}-g_k| <= kappa_f s_k,
/// as min_k of 1 - lhs/rhs. Positive margins mean the data admit a C^1 Hermite interpolant
/// with Lipschitz gradient.
struct Admissibility {
  double kappa_f = 0.0;
  double value_margin = 0.0;
  double slope_margin = 0.0;
  bool ok() const { return value_margin >= 0.0 && slope_margin >= 0.0; }
};

Admissibility admissibility(const SharpSequence& seq);

/// Piecewise cubic Hermite interpolant of (x_k, f_k, g_k), extended by quadratics of
/// curvature kappa_f beyond the end points.
class HermiteInterpolant : public Objective {
 public:
  HermiteInterpolant(VectorXd x, VectorXd f, VectorXd g, double end_curvature);

  void evaluate(const VectorXd& x, double& f, VectorXd* g, MatrixXd* H) const override;

  /// Value, slope and curvature at a scalar point.
  void eval1(double x, double& f, double& g, double& h) const;

  /// Max |p''| over each interval's end points (p'' is affine per interval).
  double max_curvature() const;

  Index intervals() const { return x_.size() - 1; }
  const VectorXd& breakpoints() const { return x_; }

 private:
  VectorXd x_, f_, g_;
  VectorXd c2_, c3_;
  double end_curvature_;
};

/// Throws ConstructionError if admissibility fails.
HermiteInterpolant hermite_build(const SharpSequence& seq);

/// The interpolant as a one-dimensional problem starting at x0 = 0.
ProblemInstance sharp_problem(const SharpSequence& seq, const HermiteInterpolant& interp);

/// The ASTR1 configuration that should reproduce the sequence (B = 0, no stopping test).
Astr1Config replay_config(const SharpSequence& seq);

struct ReplayReport {
  IterationTrace trace;
  double max_x_deviation = 0.0;  ///< max_k |x_k - x_k^seq| / max(1, |x_k^seq|)
  double max_g_deviation = 0.0;  ///< max_k | ||g_k|| / prescribed - 1 |
  Index first_divergent = -1;    ///< first k exceeding the tolerance, -1 when none
  bool ok() const { return first_divergent < 0; }
};

ReplayReport replay(const SharpSequence& seq, const HermiteInterpolant& interp,
                    double tol = 1e-8);

}  // namespace offo
