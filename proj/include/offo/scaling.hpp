#pragma once

#include <optional>
#include <string>

#include "offo/problems.hpp"

namespace offo {

enum class ScalingVariant { AdagradLike, AdamLike, DiminishingMax, DiminishingAvg };

/// Parameters of the weight recurrence w_{i,k} that sets the trust-region radii.
struct ScalingRule {
  ScalingVariant variant = ScalingVariant::AdagradLike;
  double mu = 0.5;        ///< accumulator exponent (Adagrad/Adam) or upper growth power
  double nu = 0.1;        ///< growth power (k+1)^nu of the diminishing rules
  double theta = 1.0;
  double vartheta = 1.0;  ///< Adagrad only: w = sqrt(vartheta) v
  double sigma = 0.01;    ///< uniform floor
  std::optional<VectorXd> sigma_per_coordinate;
  double beta2 = 0.9;     ///< Adam only
  bool aggregated = false;  ///< one weight from ||g||_2 shared by all coordinates
  bool theta_auto = false;  ///< theta = sqrt(n)

  double effective_theta(Index n) const;
  double sigma_at(Index i) const;
  double sigma_min() const;
};

/// Throws DomainError if a parameter is out of range.
void validate(const ScalingRule& rule);

/// Accumulator of the recurrence. k is the index of the most recent gradient (-1 before any).
struct ScalingState {
  Index k = -1;
  Index n = 0;
  VectorXd acc;  ///< size n, or 1 when aggregated
};

ScalingState initial_state(const ScalingRule& rule, Index n);

/// Incorporates g_k. The current gradient is part of the sum used for w_k.
ScalingState update(const ScalingState& state, const ScalingRule& rule, const VectorXd& g);

/// Weights w_k from the current accumulator. Requires at least one update.
VectorXd weights(const ScalingState& state, const ScalingRule& rule);

/// Analytic lower bound on every weight the rule can produce (for all k).
double as4_floor(const ScalingRule& rule, Index n = 1);

std::string to_string(ScalingVariant v);

}  // namespace offo
