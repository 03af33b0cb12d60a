#include "offo/theory.hpp"

#include <algorithm>
#include <cmath>

namespace offo {

SeriesBound series_bound(const VectorXd& a, double xi, double alpha) {
  if (!(xi > 0.0)) throw DomainError("series bound needs xi > 0");
  if (!(alpha > 0.0)) throw DomainError("series bound needs alpha > 0");
  if (!a.allFinite() || (a.array() < 0.0).any()) {
    throw DomainError("series bound needs a finite non-negative sequence");
  }
  SeriesBound out;
  double b = 0.0;
  for (Index j = 0; j < a.size(); ++j) {
    b += a(j);
    out.lhs += a(j) / std::pow(xi + b, alpha);
  }
  // ((xi+b)^(1-alpha) - xi^(1-alpha)) / (1-alpha), written to stay accurate near alpha = 1.
  const double log_ratio = std::log1p(b / xi);
  if (alpha == 1.0) {
    out.rhs = log_ratio;
  } else {
    const double c = 1.0 - alpha;
    out.rhs = std::pow(xi, c) * std::expm1(c * log_ratio) / c;
    out.majorant = alpha < 1.0 ? std::pow(xi + b, c) / c : std::pow(xi, c) / (alpha - 1.0);
  }
  return out;
}

double lambert_w_m1(double x) {
  const double branch = -std::exp(-1.0);
  if (!(x < 0.0) || x < branch * (1.0 + 4e-16)) {
    throw DomainError("W_{-1} is defined on [-1/e, 0)");
  }
  if (x <= branch) return -1.0;

  double w;
  if (x < -0.25) {
    // Series about the branch point in p = -sqrt(2 (1 + e x)).
    const double p = -std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  w = std::min(w, -1.0);

  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (f == 0.0 || wp1 == 0.0) break;
    const double fp = ew * wp1;
    const double step = f / (fp - (w + 2.0) * f / (2.0 * wp1));
    const double next = std::min(w - step, -1.0);
    if (std::abs(next - w) <= 1e-16 * std::abs(w)) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

double lambert_w_m1_log(double l) {
  if (!(l <= -1.0)) throw DomainError("W_{-1} needs log(-x) <= -1");
  if (l > -700.0) return lambert_w_m1(-std::exp(l));
  // Newton on w + log(-w) = l, from the asymptotic seed.
  double w = l - std::log(-l);
  for (int it = 0; it < 64; ++it) {
    const double step = (w + std::log(-w) - l) / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 1e-16 * std::abs(w)) break;
  }
  return w;
}

double TheoryParams::lipschitz() const {
  if (!L) throw CapabilityError("Lipschitz constant unavailable");
  return *L;
}

double kappa2_lambert_term(const TheoryParams& p) {
  const double L = p.lipschitz();
  const double n = static_cast<double>(p.n);
  const double scale = 8.0 * n * p.kappa_B * (p.kappa_B + L);
  const double v32 = std::pow(p.vartheta, 1.5);
  const double w = lambert_w_m1(-p.tau * p.sigma * p.theta * v32 / scale);
  const double c = scale / (p.tau * v32 * p.theta);
  return c * c * w * w / (2.0 * p.sigma);
}

double kappa_constants(const TheoryParams& p, double mu) {
  if (!(mu >= 0.01 && mu <= 0.99)) throw DomainError("mu must lie in [0.01, 0.99]");
  const double L = p.lipschitz();
  const double n = static_cast<double>(p.n);
  const double kBL = p.kappa_B + L;
  const double kBBL = p.kappa_B * kBL;
  const double s = p.sigma;
  if (mu == 0.5) {
    const double t2 = 0.5 * std::exp(2.0 * p.Gamma0 * p.vartheta * p.theta * p.theta / (n * kBL));
    return std::max({s, t2, kappa2_lambert_term(p)});
  }
  if (mu < 0.5) {
    const double d = 1.0 - 2.0 * mu;
    const double t2 = std::pow(std::pow(2.0, 2.0 * mu) * p.vartheta * d * p.theta * p.theta *
                                   p.Gamma0 / (n * kBL),
                               1.0 / d);
    const double t3 = std::pow(4.0 * n * kBBL /
                                   (d * p.tau * p.theta * std::pow(s, mu) *
                                    std::pow(p.vartheta, 1.5)),
                               1.0 / mu);
    return std::max({s, t2, t3});
  }
  const double inner = p.Gamma0 * p.theta +
                       n * kBL * std::pow(s, 1.0 - 2.0 * mu) /
                           (2.0 * p.vartheta * p.theta * (2.0 * mu - 1.0));
  const double t2 = std::pow(std::pow(2.0, 1.0 + mu) * p.kappa_B /
                                 (p.tau * std::pow(s, mu) * std::sqrt(p.vartheta)) * inner,
                             1.0 / (1.0 - mu));
  return std::max(s, t2);
}

TheoryParams theory_params(const ProblemInstance& problem, const Astr1Config& cfg) {
  if (!problem.lipschitz_hint || !problem.lipschitz_exact) {
    throw CapabilityError("problem " + problem.name + " has no exact Lipschitz constant");
  }
  TheoryParams p;
  p.L = *problem.lipschitz_hint;
  p.Gamma0 = problem.value(problem.x0) - problem.f_low;
  p.n = problem.n;
  p.tau = cfg.tau;
  p.kappa_B = cfg.model == ModelKind::Zero ? 1.0 : cfg.kappa_B;
  p.theta = cfg.scaling.effective_theta(problem.n);
  p.vartheta = cfg.scaling.vartheta;
  p.sigma = cfg.scaling.sigma_min();
  return p;
}

EnvelopeReport envelope_check(const IterationTrace& trace, double kappa) {
  EnvelopeReport r;
  r.kappa = kappa;
  double sum = 0.0;
  for (const IterationRecord& rec : trace.records) {
    sum += rec.normg * rec.normg;
    const double ratio = sum / kappa;
    if (ratio > r.max_ratio || r.checked == 0) {
      r.max_ratio = ratio;
      r.worst_k = rec.k;
    }
    ++r.checked;
  }
  return r;
}

double ming_threshold(const TheoryParams& p, double sigma_min, double eta, double nu) {
  if (!(eta > 0.0 && eta < p.tau * sigma_min)) {
    throw DomainError("eta must lie in (0, tau sigma_min)");
  }
  if (!(nu > 0.0)) throw DomainError("nu must be positive");
  const double L = p.lipschitz();
  return std::pow(p.kappa_B * (p.kappa_B + L) / (p.theta * sigma_min * (p.tau * sigma_min - eta)),
                  1.0 / nu);
}

MingReport ming_check(const IterationTrace& trace, const TheoryParams& p, double sigma_min,
                      double eta, double nu) {
  MingReport r;
  r.j_eta = ming_threshold(p, sigma_min, eta, nu);
  const double kBBL = p.kappa_B * (p.kappa_B + p.lipschitz());
  r.min_bracket = std::numeric_limits<double>::infinity();
  for (const IterationRecord& rec : trace.records) {
    if (rec.terminal || static_cast<double>(rec.k) <= r.j_eta) continue;
    const double bracket = p.tau * sigma_min - kBBL / rec.w_min;
    r.min_bracket = std::min(r.min_bracket, bracket);
    ++r.checked;
    if (!(bracket > eta)) ++r.violations;
  }
  r.vacuous = r.checked == 0;
  return r;
}

DecreaseReport decrease_check(const IterationTrace& trace, const TheoryParams& p,
                              double sigma_min) {
  DecreaseReport r;
  const double L = p.lipschitz();
  const auto& recs = trace.records;
  for (std::size_t j = 0; j + 1 < recs.size(); ++j) {
    const IterationRecord& a = recs[j];
    if (a.terminal) break;
    if (std::isnan(a.f) || std::isnan(recs[j + 1].f)) {
      throw CapabilityError("decrease check needs a trace recorded with instrument_f");
    }
    const double rhs = a.f - p.tau * sigma_min / (2.0 * p.kappa_B) * a.sum_g2_over_w +
                       0.5 * (p.kappa_B + L) * a.sum_g2_over_w2;
    const double excess = recs[j + 1].f - rhs;
    ++r.checked;
    if (excess > r.max_violation) {
      r.max_violation = excess;
      r.worst_k = a.k;
    }
  }
  return r;
}

double decrease_sigma_min(const ScalingRule& rule, Index n) {
  return std::min(as4_floor(rule, n), 1.0);
}

}  // namespace offo
