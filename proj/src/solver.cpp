#include "offo/solver.hpp"

#include <algorithm>

namespace offo {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Largest t >= 0 with ||s + t p|| <= radius.
double ball_boundary_step(const VectorXd& s, const VectorXd& p, double radius) {
  const double pp = p.squaredNorm();
  if (pp == 0.0) return 0.0;
  const double sp = s.dot(p);
  const double ss = s.squaredNorm();
  const double disc = std::max(0.0, sp * sp + pp * (radius * radius - ss));
  // Stable root of pp t^2 + 2 sp t + (ss - r^2) = 0.
  const double c = ss - radius * radius;
  if (sp >= 0.0) {
    const double denom = sp + std::sqrt(disc);
    return denom > 0.0 ? -c / denom : 0.0;
  }
  return (-sp + std::sqrt(disc)) / pp;
}

// Projected truncated CG for min q(s) over |s_i| <= Delta_i.
// When a CG step leaves the box, the iterate stops at the first face, the coordinates that
// reached it are fixed, and CG restarts on the remaining free coordinates.
VectorXd box_cg(const VectorXd& g, const HessianModel& model, const VectorXd& delta, double tol,
                int& iterations) {
  const Index n = g.size();
  VectorXd s = VectorXd::Zero(n);
  std::vector<char> free(n);
  Index free_count = 0;
  for (Index i = 0; i < n; ++i) {
    free[i] = delta(i) > 0.0;
    free_count += free[i];
  }
  VectorXd r = g;
  const int max_inner = static_cast<int>(2 * n + 2);
  for (Index restart = 0; restart <= n && free_count > 0; ++restart) {
    if (r.norm() <= tol) break;
    VectorXd p(n);
    for (Index i = 0; i < n; ++i) p(i) = free[i] ? -r(i) : 0.0;
    double rz = p.squaredNorm();
    if (rz <= tol * tol) break;
    bool hit = false;
    bool done = false;
    for (int it = 0; it < max_inner; ++it) {
      ++iterations;
      const VectorXd Bp = model.apply(p);
      const double curv = p.dot(Bp);
      double alpha_b = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < n; ++i) {
        if (!free[i] || p(i) == 0.0) continue;
        const double t = (sign(p(i)) * delta(i) - s(i)) / p(i);
        alpha_b = std::min(alpha_b, std::max(0.0, t));
      }
      const bool leaves = curv <= 0.0 || rz / curv >= alpha_b;
      if (leaves) {
        if (!std::isfinite(alpha_b)) {
          done = true;
          break;
        }
        s += alpha_b * p;
        for (Index i = 0; i < n; ++i) {
          if (!free[i] || p(i) == 0.0) continue;
          if (std::abs(s(i)) >= delta(i) * (1.0 - 1e-12)) {
            s(i) = sign(p(i)) * delta(i);
            free[i] = 0;
            --free_count;
          }
        }
        r = g + model.apply(s);
        hit = true;
        break;
      }
      const double alpha = rz / curv;
      s += alpha * p;
      r += alpha * Bp;
      double rz_new = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (free[i]) rz_new += r(i) * r(i);
      }
      if (r.norm() <= tol || rz_new <= tol * tol) {
        done = true;
        break;
      }
      const double beta = rz_new / rz;
      for (Index i = 0; i < n; ++i) p(i) = free[i] ? -r(i) + beta * p(i) : 0.0;
      rz = rz_new;
    }
    if (done || !hit) break;
  }
  return s.cwiseMax(-delta).cwiseMin(delta);
}

// Steihaug-Toint CG for min q(s) over ||s|| <= radius.
VectorXd ball_cg(const VectorXd& g, const HessianModel& model, double radius, double tol,
                 int& iterations) {
  const Index n = g.size();
  VectorXd s = VectorXd::Zero(n);
  VectorXd r = g;
  if (r.norm() <= tol || radius <= 0.0) return s;
  VectorXd p = -r;
  double rr = r.squaredNorm();
  const int max_inner = static_cast<int>(2 * n + 2);
  for (int it = 0; it < max_inner; ++it) {
    ++iterations;
    const VectorXd Bp = model.apply(p);
    const double curv = p.dot(Bp);
    if (curv <= 0.0) {
      s += ball_boundary_step(s, p, radius) * p;
      break;
    }
    const double alpha = rr / curv;
    if ((s + alpha * p).norm() >= radius) {
      s += ball_boundary_step(s, p, radius) * p;
      break;
    }
    s += alpha * p;
    r += alpha * Bp;
    const double rr_new = r.squaredNorm();
    if (std::sqrt(rr_new) <= tol) break;
    p = -r + (rr_new / rr) * p;
    rr = rr_new;
  }
  const double ns = s.norm();
  if (ns > radius) s *= radius / ns;
  return s;
}

double step_excess(const VectorXd& s, const Radii& radii) {
  if (radii.geometry == Geometry::Ball) {
    return (s.norm() - radii.ball) / (1.0 + radii.ball);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < s.size(); ++i) {
    const double d = radii.per_coordinate(i);
    worst = std::max(worst, (std::abs(s(i)) - d) / (1.0 + d));
  }
  return s.size() ? worst : 0.0;
}

void copy_counters(const Oracle& oracle, IterationTrace& trace) {
  trace.value_calls = oracle.value_calls();
  trace.gradient_calls = oracle.gradient_calls();
  trace.hessian_calls = oracle.hessian_calls();
  trace.instrument_calls = oracle.instrument_calls();
}

}  // namespace

void validate(const Astr1Config& cfg) {
  validate(cfg.scaling);
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw DomainError("tau must lie in (0, 1]");
  if (!(cfg.kappa_B >= 1.0)) throw DomainError("kappa_B must be at least 1");
  if (!(cfg.eps >= 0.0)) throw DomainError("eps must be non-negative");
  if (cfg.max_iter < 0) throw DomainError("max_iter must be non-negative");
  if (cfg.lbfgs_memory < 1) throw DomainError("lbfgs memory must be positive");
  if (cfg.geometry == Geometry::Ball && !cfg.scaling.aggregated) {
    throw DomainError("ball geometry requires an aggregated (norm) scaling");
  }
}

double model_value(const VectorXd& g, const HessianModel& model, const VectorXd& s) {
  if (model.is_zero()) return g.dot(s);
  return g.dot(s) + 0.5 * s.dot(model.apply(s));
}

CauchyStep cauchy_step(const VectorXd& g, const HessianModel& model, const Radii& radii) {
  CauchyStep c;
  const Index n = g.size();
  c.s_L.resize(n);
  for (Index i = 0; i < n; ++i) c.s_L(i) = -sign(g(i)) * radii.per_coordinate(i);
  const double slope = g.dot(c.s_L);
  c.curvature = model.is_zero() ? 0.0 : c.s_L.dot(model.apply(c.s_L));
  c.gamma = c.curvature > 0.0 ? std::min(1.0, std::abs(slope) / c.curvature) : 1.0;
  c.s_Q = c.gamma * c.s_L;
  c.q_Q = c.gamma * slope + 0.5 * c.gamma * c.gamma * c.curvature;
  return c;
}

SubproblemResult solve_subproblem(const VectorXd& g, const HessianModel& model,
                                  const Radii& radii, const CauchyStep& cauchy,
                                  const Astr1Config& cfg) {
  SubproblemResult out;
  if (model.is_zero()) {
    out.s = cauchy.s_L;
    out.q = g.dot(out.s);
    return out;
  }
  const double tol = std::max(cfg.cg_abs, cfg.cg_rel * g.norm());
  out.s = radii.geometry == Geometry::Box
              ? box_cg(g, model, radii.per_coordinate, tol, out.cg_iterations)
              : ball_cg(g, model, radii.ball, tol, out.cg_iterations);
  out.q = model_value(g, model, out.s);
  if (!std::isfinite(out.q) || out.q > cfg.tau * cauchy.q_Q) {
    out.s = cauchy.s_Q;
    out.q = cauchy.q_Q;
    out.used_cauchy_fallback = true;
  }
  return out;
}

SubproblemResult solve_subproblem(const VectorXd& g, const HessianModel& model,
                                  const Radii& radii, const Astr1Config& cfg) {
  return solve_subproblem(g, model, radii, cauchy_step(g, model, radii), cfg);
}

IterationTrace astr1_run(const ProblemInstance& problem, const Astr1Config& cfg,
                         double noise_level, std::uint64_t seed) {
  Oracle oracle(problem, noise_level, seed);
  return astr1_run(oracle, cfg);
}

IterationTrace astr1_run(Oracle& oracle, const Astr1Config& cfg) {
  validate(cfg);
  const ProblemInstance& problem = oracle.problem();
  if (cfg.model == ModelKind::Exact && !problem.has_hessian()) {
    throw CapabilityError("problem " + problem.name + " has no Hessian for the exact model");
  }
  const Index n = problem.n;
  const bool keep = cfg.trace_level != TraceLevel::Summary;
  const bool full = cfg.trace_level == TraceLevel::Full;

  IterationTrace trace;
  HessianModel model(cfg.model, cfg.kappa_B, cfg.lbfgs_memory);
  ScalingState state = initial_state(cfg.scaling, n);
  VectorXd x = problem.x0;
  VectorXd g_prev, s_prev;

  auto instrument = [&](const VectorXd& at) {
    if (!cfg.instrument_f) return std::numeric_limits<double>::quiet_NaN();
    try {
      return oracle.clean_value(at);
    } catch (const NonFiniteError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto finish = [&](Index k, double normg, const VectorXd* g, RunStatus status) {
    trace.status = status;
    trace.iterations = k;
    trace.final_normg = normg;
    trace.x_final = x;
    if (keep) {
      IterationRecord rec;
      rec.k = k;
      rec.normg = normg;
      rec.f = instrument(x);
      rec.terminal = true;
      if (full) {
        rec.x = x;
        if (g) rec.g = *g;
      }
      trace.records.push_back(std::move(rec));
    }
    copy_counters(oracle, trace);
  };

  for (Index k = 0;; ++k) {
    VectorXd g;
    try {
      g = oracle.gradient(x);
    } catch (const NonFiniteError&) {
      finish(k, std::numeric_limits<double>::infinity(), nullptr, RunStatus::Overflow);
      return trace;
    }
    const double normg = g.norm();
    if (normg <= cfg.eps) {
      finish(k, normg, &g, RunStatus::Converged);
      return trace;
    }
    if (k >= cfg.max_iter) {
      finish(k, normg, &g, RunStatus::MaxIter);
      return trace;
    }

    if (k > 0 && (cfg.model == ModelKind::BBDiag || cfg.model == ModelKind::LBFGS)) {
      model.absorb(s_prev, g - g_prev);
    }
    if (cfg.model == ModelKind::Exact) {
      try {
        model.set_hessian(oracle.hessian(x));
      } catch (const NonFiniteError&) {
        finish(k, normg, &g, RunStatus::Overflow);
        return trace;
      }
    }

    state = update(state, cfg.scaling, g);
    const VectorXd w = weights(state, cfg.scaling);
    const Radii radii = trust_radius(g, w, cfg.geometry);
    const CauchyStep cauchy = cauchy_step(g, model, radii);
    const SubproblemResult sub = solve_subproblem(g, model, radii, cauchy, cfg);

    const double excess = step_excess(sub.s, radii);
    const double gcp = (sub.q - cfg.tau * cauchy.q_Q) / std::max(1.0, std::abs(cauchy.q_Q));
    trace.max_step_excess = std::max(trace.max_step_excess, excess);
    trace.max_gcp_residual = std::max(trace.max_gcp_residual, gcp);
    trace.max_q_cauchy = std::max(trace.max_q_cauchy, cauchy.q_Q);
    trace.cauchy_fallbacks += sub.used_cauchy_fallback;

    if (keep) {
      IterationRecord rec;
      rec.k = k;
      rec.normg = normg;
      rec.f = instrument(x);
      rec.delta_min = radii.per_coordinate.minCoeff();
      rec.delta_max = radii.per_coordinate.maxCoeff();
      rec.gamma = cauchy.gamma;
      rec.q_step = sub.q;
      rec.q_cauchy = cauchy.q_Q;
      rec.step_excess = excess;
      rec.gcp_residual = gcp;
      rec.sum_g2_over_w = g.cwiseAbs2().cwiseQuotient(w).sum();
      rec.sum_g2_over_w2 = g.cwiseQuotient(w).squaredNorm();
      rec.w_min = w.minCoeff();
      if (full) {
        rec.x = x;
        rec.g = g;
        rec.w = w;
        rec.delta = radii.per_coordinate;
        rec.s = sub.s;
      }
      trace.records.push_back(std::move(rec));
    }

    VectorXd x_next = x + sub.s;
    if (!x_next.allFinite()) {
      finish(k + 1, std::numeric_limits<double>::infinity(), nullptr, RunStatus::Overflow);
      return trace;
    }
    g_prev = std::move(g);
    s_prev = sub.s;
    x = std::move(x_next);
  }
}

IterationTrace sdba_run(const ProblemInstance& problem, const SdbaConfig& cfg,
                        double noise_level, std::uint64_t seed) {
  Oracle oracle(problem, noise_level, seed);
  return sdba_run(oracle, cfg);
}

IterationTrace sdba_run(Oracle& oracle, const SdbaConfig& cfg) {
  if (!(cfg.c1 > 0.0 && cfg.c1 < 1.0)) throw DomainError("c1 must lie in (0, 1)");
  if (cfg.max_backtracks < 0) throw DomainError("max_backtracks must be non-negative");
  const ProblemInstance& problem = oracle.problem();
  const bool keep = cfg.trace_level != TraceLevel::Summary;
  IterationTrace trace;
  VectorXd x = problem.x0;

  auto finish = [&](Index k, double normg, double f, RunStatus status) {
    trace.status = status;
    trace.iterations = k;
    trace.final_normg = normg;
    trace.x_final = x;
    if (keep) {
      IterationRecord rec;
      rec.k = k;
      rec.normg = normg;
      rec.f = f;
      rec.terminal = true;
      trace.records.push_back(rec);
    }
    copy_counters(oracle, trace);
  };

  double f = 0.0;
  VectorXd g;
  try {
    f = oracle.value(x);
    g = oracle.gradient(x);
  } catch (const NonFiniteError&) {
    finish(0, std::numeric_limits<double>::infinity(), f, RunStatus::Overflow);
    return trace;
  }
  double alpha_last = 0.0;
  for (Index k = 0;; ++k) {
    const double normg = g.norm();
    if (normg <= cfg.eps) {
      finish(k, normg, f, RunStatus::Converged);
      return trace;
    }
    if (k >= cfg.max_iter) {
      finish(k, normg, f, RunStatus::MaxIter);
      return trace;
    }
    double alpha = k == 0 ? 1.0 / normg : 2.0 * alpha_last;
    const double g2 = normg * normg;
    bool accepted = false;
    VectorXd x_trial;
    double f_trial = 0.0;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      x_trial = x - alpha * g;
      try {
        f_trial = oracle.value(x_trial);
      } catch (const NonFiniteError&) {
        f_trial = std::numeric_limits<double>::infinity();
      }
      if (f_trial <= f - cfg.c1 * alpha * g2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      finish(k, normg, f, RunStatus::Failure);
      return trace;
    }
    if (keep) {
      IterationRecord rec;
      rec.k = k;
      rec.normg = normg;
      rec.f = f;
      rec.gamma = alpha;
      rec.q_step = -alpha * g2;
      trace.records.push_back(rec);
    }
    x = std::move(x_trial);
    f = f_trial;
    alpha_last = alpha;
    try {
      g = oracle.gradient(x);
    } catch (const NonFiniteError&) {
      finish(k + 1, std::numeric_limits<double>::infinity(), f, RunStatus::Overflow);
      return trace;
    }
  }
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIter: return "max_iter";
    case RunStatus::Overflow: return "overflow";
    case RunStatus::Failure: return "failure";
  }
  return "unknown";
}

std::string to_string(Geometry geometry) {
  return geometry == Geometry::Box ? "box" : "ball";
}

Geometry parse_geometry(const std::string& name) {
  if (name == "box") return Geometry::Box;
  if (name == "ball") return Geometry::Ball;
  throw CatalogError("unknown geometry: " + name);
}

}  // namespace offo
