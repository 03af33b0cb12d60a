#include "offo/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace offo {

double ScalingRule::effective_theta(Index n) const {
  return theta_auto ? std::sqrt(static_cast<double>(n)) : theta;
}

double ScalingRule::sigma_at(Index i) const {
  return sigma_per_coordinate ? (*sigma_per_coordinate)(i) : sigma;
}

double ScalingRule::sigma_min() const {
  return sigma_per_coordinate ? sigma_per_coordinate->minCoeff() : sigma;
}

void validate(const ScalingRule& rule) {
  auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(rule.theta > 0.0)) throw DomainError("theta must be positive");
  if (!(rule.sigma > 0.0 && rule.sigma <= 1.0)) throw DomainError("sigma must lie in (0,1]");
  if (rule.sigma_per_coordinate) {
    const VectorXd& s = *rule.sigma_per_coordinate;
    if (!((s.array() > 0.0).all() && (s.array() <= 1.0).all())) {
      throw DomainError("per-coordinate sigma must lie in (0,1]");
    }
  }
  switch (rule.variant) {
    case ScalingVariant::AdagradLike:
      if (!in_open_unit(rule.mu)) throw DomainError("mu must lie in (0,1)");
      if (!(rule.vartheta > 0.0 && rule.vartheta <= 1.0)) {
        throw DomainError("vartheta must lie in (0,1]");
      }
      break;
    case ScalingVariant::AdamLike:
      if (!in_open_unit(rule.mu)) throw DomainError("mu must lie in (0,1)");
      if (!in_open_unit(rule.beta2)) throw DomainError("beta2 must lie in (0,1)");
      break;
    case ScalingVariant::DiminishingMax:
    case ScalingVariant::DiminishingAvg:
      if (!in_open_unit(rule.mu)) throw DomainError("mu must lie in (0,1)");
      if (!(rule.nu > 0.0 && rule.nu <= rule.mu)) throw DomainError("nu must lie in (0,mu]");
      break;
  }
}

ScalingState initial_state(const ScalingRule& rule, Index n) {
  ScalingState s;
  s.n = n;
  const Index m = rule.aggregated ? 1 : n;
  if (rule.variant == ScalingVariant::AdagradLike) {
    s.acc.resize(m);
    for (Index i = 0; i < m; ++i) s.acc(i) = rule.aggregated ? rule.sigma_min() : rule.sigma_at(i);
  } else {
    s.acc = VectorXd::Zero(m);
  }
  return s;
}

ScalingState update(const ScalingState& state, const ScalingRule& rule, const VectorXd& g) {
  if (g.size() != state.n) throw DimensionError("gradient size does not match scaling state");
  if (!g.allFinite()) throw NonFiniteError("non-finite gradient in scaling update");
  ScalingState next = state;
  ++next.k;
  VectorXd sq;
  VectorXd mag;
  if (rule.aggregated) {
    sq = VectorXd::Constant(1, g.squaredNorm());
    mag = VectorXd::Constant(1, g.norm());
  } else {
    sq = g.array().square();
    mag = g.cwiseAbs();
  }
  switch (rule.variant) {
    case ScalingVariant::AdagradLike:
      next.acc += sq;
      break;
    case ScalingVariant::AdamLike:
      next.acc = rule.beta2 * next.acc + sq;
      break;
    case ScalingVariant::DiminishingMax:
      next.acc = next.acc.cwiseMax(mag);
      break;
    case ScalingVariant::DiminishingAvg:
      next.acc += mag;
      break;
  }
  return next;
}

VectorXd weights(const ScalingState& state, const ScalingRule& rule) {
  if (state.k < 0) throw std::logic_error("weights requested before any scaling update");
  const double theta = rule.effective_theta(state.n);
  const Index m = state.acc.size();
  const double kp1 = static_cast<double>(state.k + 1);
  VectorXd w(m);
  for (Index i = 0; i < m; ++i) {
    const double sig = rule.aggregated ? rule.sigma_min() : rule.sigma_at(i);
    switch (rule.variant) {
      case ScalingVariant::AdagradLike:
        w(i) = std::sqrt(rule.vartheta) * theta * std::pow(state.acc(i), rule.mu);
        break;
      case ScalingVariant::AdamLike:
        w(i) = theta * std::pow(sig + state.acc(i), rule.mu);
        break;
      case ScalingVariant::DiminishingMax:
        w(i) = theta * std::max(sig, state.acc(i)) * std::pow(kp1, rule.nu);
        break;
      case ScalingVariant::DiminishingAvg:
        w(i) = theta * std::max(sig, state.acc(i) / kp1) * std::pow(kp1, rule.nu);
        break;
    }
  }
  if (rule.aggregated) return VectorXd::Constant(state.n, w(0));
  return w;
}

double as4_floor(const ScalingRule& rule, Index n) {
  const double theta = rule.effective_theta(n);
  const double sig = rule.sigma_min();
  switch (rule.variant) {
    case ScalingVariant::AdagradLike:
      return theta * std::sqrt(rule.vartheta) * std::pow(sig, rule.mu);
    case ScalingVariant::AdamLike:
      return theta * std::pow(sig, rule.mu);
    case ScalingVariant::DiminishingMax:
    case ScalingVariant::DiminishingAvg:
      return theta * sig;
  }
  return 0.0;
}

std::string to_string(ScalingVariant v) {
  switch (v) {
    case ScalingVariant::AdagradLike:
      return "adagrad-like";
    case ScalingVariant::AdamLike:
      return "adam-like";
    case ScalingVariant::DiminishingMax:
      return "diminishing-max";
    case ScalingVariant::DiminishingAvg:
      return "diminishing-avg";
  }
  return "?";
}

}  // namespace offo
