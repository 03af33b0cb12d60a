#include "offo/sharpness.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace offo {

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta is evaluated only for s > 1");
  constexpr int N = 20;
  // B_{2j} / (2j)!
  static constexpr std::array<double, 8> coef = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0};
  double sum = 0.0;
  for (int k = N - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  const double Nd = N;
  double tail = std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  // Rising factorial s (s+1) ... (s+2j-2) times N^{-s-2j+1}.
  double rising = s;
  double power = std::pow(Nd, -s - 1.0);
  for (std::size_t j = 0; j < coef.size(); ++j) {
    tail += coef[j] * rising * power;
    const double a = s + 2.0 * j + 1.0;
    rising *= a * (a + 1.0);
    power /= Nd * Nd;
  }
  return sum + tail;
}

SharpSequence build_sequence(SharpKind kind, const SharpParams& p, Index K) {
  if (K < 0) throw DomainError("K must be non-negative");
  if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw DomainError("sigma must lie in (0,1)");
  SharpSequence seq;
  seq.kind = kind;
  seq.params = p;
  seq.K = K;
  seq.g.resize(K + 1);
  seq.s.resize(K);
  seq.w.resize(K);
  seq.x.resize(K + 1);
  seq.f.resize(K + 1);

  if (kind == SharpKind::Thm31) {
    if (!(p.mu > 0.0 && p.mu < 1.0)) throw DomainError("mu must lie in (0,1)");
    if (!(p.eta > 0.0 && p.eta <= 1.0)) throw DomainError("eta must lie in (0,1]");
    const double e = 0.5 + p.eta;
    seq.g(0) = -2.0;
    for (Index k = 1; k <= K; ++k) seq.g(k) = -std::pow(static_cast<double>(k), -e);
    double acc = p.sigma;
    for (Index k = 0; k < K; ++k) {
      acc += seq.g(k) * seq.g(k);
      seq.w(k) = std::pow(acc, p.mu);
      seq.s(k) = std::abs(seq.g(k)) / seq.w(k);
    }
    seq.f0 = 4.0 / std::pow(p.sigma + 4.0, p.mu) + riemann_zeta(1.0 + 2.0 * p.eta);
    seq.kappa_f = std::max({1.5 * std::pow(p.sigma + 5.0, p.mu), seq.f0, 2.0});
  } else {
    if (!(p.nu > 0.0 && p.nu < 1.0)) throw DomainError("nu must lie in (0,1)");
    if (!(p.omega > 0.5 * (1.0 - p.nu) && p.omega <= 1.0)) {
      throw DomainError("omega must lie in ((1-nu)/2, 1]");
    }
    for (Index k = 0; k <= K; ++k) seq.g(k) = -std::pow(static_cast<double>(k + 1), -p.omega);
    for (Index k = 0; k < K; ++k) {
      seq.w(k) = std::pow(static_cast<double>(k + 1), p.nu);
      seq.s(k) = std::abs(seq.g(k)) / seq.w(k);
    }
    seq.f0 = riemann_zeta(2.0 * p.omega + p.nu);
    seq.kappa_f = p.omega;
  }

  seq.x(0) = 0.0;
  seq.f(0) = seq.f0;
  for (Index k = 0; k < K; ++k) {
    seq.x(k + 1) = seq.x(k) + seq.s(k);
    seq.f(k + 1) = seq.f(k) + seq.g(k) * seq.s(k);
  }
  return seq;
}

Admissibility admissibility(const SharpSequence& seq) {
  Admissibility a;
  a.kappa_f = seq.kappa_f;
  a.value_margin = 1.0;
  a.slope_margin = 1.0;
  for (Index k = 0; k < seq.K; ++k) {
    const double s = seq.s(k);
    const double dv = std::abs(seq.f(k + 1) - seq.f(k) - seq.g(k) * s);
    const double dg = std::abs(seq.g(k + 1) - seq.g(k));
    a.value_margin = std::min(a.value_margin, 1.0 - dv / (seq.kappa_f * s * s));
    a.slope_margin = std::min(a.slope_margin, 1.0 - dg / (seq.kappa_f * s));
  }
  return a;
}

HermiteInterpolant::HermiteInterpolant(VectorXd x, VectorXd f, VectorXd g, double end_curvature)
    : x_(std::move(x)), f_(std::move(f)), g_(std::move(g)), end_curvature_(end_curvature) {
  const Index m = x_.size();
  if (m < 1 || f_.size() != m || g_.size() != m) {
    throw ConstructionError("Hermite data must be non-empty and of equal length");
  }
  c2_.resize(m - 1);
  c3_.resize(m - 1);
  for (Index k = 0; k + 1 < m; ++k) {
    const double h = x_(k + 1) - x_(k);
    if (!(h > 0.0)) throw ConstructionError("Hermite breakpoints must increase strictly");
    const double D = (f_(k + 1) - f_(k) - g_(k) * h) / (h * h);
    const double E = (g_(k + 1) - g_(k)) / h;
    c2_(k) = 3.0 * D - E;
    c3_(k) = (E - 2.0 * D) / h;
  }
}

void HermiteInterpolant::eval1(double x, double& f, double& g, double& h) const {
  const Index m = x_.size();
  if (x < x_(0) || x > x_(m - 1) || m == 1) {
    const Index e = x < x_(0) ? 0 : m - 1;
    const double t = x - x_(e);
    f = f_(e) + g_(e) * t + 0.5 * end_curvature_ * t * t;
    g = g_(e) + end_curvature_ * t;
    h = end_curvature_;
    return;
  }
  const double* begin = x_.data();
  Index k = static_cast<Index>(std::upper_bound(begin, begin + m, x) - begin) - 1;
  k = std::clamp<Index>(k, 0, m - 2);
  const double t = x - x_(k);
  f = f_(k) + t * (g_(k) + t * (c2_(k) + t * c3_(k)));
  g = g_(k) + t * (2.0 * c2_(k) + 3.0 * c3_(k) * t);
  h = 2.0 * c2_(k) + 6.0 * c3_(k) * t;
}

void HermiteInterpolant::evaluate(const VectorXd& x, double& f, VectorXd* g, MatrixXd* H) const {
  double gv, hv;
  eval1(x(0), f, gv, hv);
  if (g) *g = VectorXd::Constant(1, gv);
  if (H) *H = MatrixXd::Constant(1, 1, hv);
}

double HermiteInterpolant::max_curvature() const {
  double m = std::abs(end_curvature_);
  for (Index k = 0; k < c2_.size(); ++k) {
    const double h = x_(k + 1) - x_(k);
    m = std::max({m, std::abs(2.0 * c2_(k)), std::abs(2.0 * c2_(k) + 6.0 * c3_(k) * h)});
  }
  return m;
}

HermiteInterpolant hermite_build(const SharpSequence& seq) {
  const Admissibility a = admissibility(seq);
  if (!a.ok()) {
    throw ConstructionError("Hermite admissibility fails (value margin " +
                            std::to_string(a.value_margin) + ", slope margin " +
                            std::to_string(a.slope_margin) + ")");
  }
  return HermiteInterpolant(seq.x, seq.f, seq.g, seq.kappa_f);
}

ProblemInstance sharp_problem(const SharpSequence& seq, const HermiteInterpolant& interp) {
  const std::string name = seq.kind == SharpKind::Thm31 ? "sharp-adagrad" : "sharp-maxg";
  // Both constructions keep f_k >= 0; the quadratic ends stay above f_K - g_K^2 / (2 kappa_f).
  const double gK = seq.g(seq.K);
  const double f_low = std::min(0.0, seq.f(seq.K) - gK * gK / (2.0 * seq.kappa_f));
  return make_custom_problem(name, VectorXd::Zero(1), f_low,
                             std::make_shared<HermiteInterpolant>(interp));
}

Astr1Config replay_config(const SharpSequence& seq) {
  Astr1Config cfg;
  cfg.model = ModelKind::Zero;
  cfg.eps = 0.0;
  cfg.max_iter = seq.K;
  cfg.trace_level = TraceLevel::Full;
  ScalingRule& r = cfg.scaling;
  r.sigma = seq.params.sigma;
  r.theta = 1.0;
  if (seq.kind == SharpKind::Thm31) {
    r.variant = ScalingVariant::AdagradLike;
    r.mu = seq.params.mu;
    r.vartheta = 1.0;
  } else {
    r.variant = ScalingVariant::DiminishingMax;
    r.nu = seq.params.nu;
    r.mu = std::max(0.5, seq.params.nu);
  }
  return cfg;
}

ReplayReport replay(const SharpSequence& seq, const HermiteInterpolant& interp, double tol) {
  ReplayReport rep;
  const ProblemInstance problem = sharp_problem(seq, interp);
  rep.trace = astr1_run(problem, replay_config(seq));
  for (const IterationRecord& rec : rep.trace.records) {
    const Index k = rec.k;
    if (k > seq.K) break;
    const double xs = seq.x(k);
    const double dx = std::abs(rec.x(0) - xs) / std::max(1.0, std::abs(xs));
    const double dg = std::abs(rec.normg / std::abs(seq.g(k)) - 1.0);
    rep.max_x_deviation = std::max(rep.max_x_deviation, dx);
    rep.max_g_deviation = std::max(rep.max_g_deviation, dg);
    if (rep.first_divergent < 0 && (dx > tol || dg > tol || !std::isfinite(rec.normg))) {
      rep.first_divergent = k;
    }
  }
  if (rep.first_divergent < 0 &&
      static_cast<Index>(rep.trace.records.size()) != seq.K + 1) {
    rep.first_divergent = static_cast<Index>(rep.trace.records.size());
  }
  return rep;
}

}  // namespace offo
