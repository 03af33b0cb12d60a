#include "doctest.h"

#include <boost/math/special_functions/lambert_w.hpp>
#include <random>

#include "offo/suites.hpp"
#include "offo/theory.hpp"
#include "offo/variants.hpp"

using namespace offo;

namespace {

TheoryParams example_params() {
  TheoryParams p;
  p.L = 1.0;
  p.Gamma0 = 0.5;
  p.n = 1;
  p.tau = 0.1;
  p.kappa_B = 1.0;
  p.theta = 1.0;
  p.vartheta = 1.0;
  p.sigma = 0.01;
  return p;
}

}  // namespace

TEST_CASE("series lemma examples") {
  const SeriesBound b = series_bound(VectorXd::Ones(3), 1.0, 1.0);
  CHECK(b.lhs == doctest::Approx(13.0 / 12.0));
  CHECK(b.rhs == doctest::Approx(std::log(4.0)));
  CHECK_FALSE(b.majorant.has_value());
  const SeriesBound z = series_bound(VectorXd::Zero(4), 2.0, 0.5);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  const SeriesBound lo = series_bound(VectorXd::Ones(3), 1.0, 0.5);
  CHECK(lo.rhs == doctest::Approx(2.0 * (2.0 - 1.0)));
  CHECK(*lo.majorant == doctest::Approx(4.0));
  const SeriesBound hi = series_bound(VectorXd::Ones(3), 1.0, 2.0);
  CHECK(hi.rhs == doctest::Approx(0.75));
  CHECK(*hi.majorant == doctest::Approx(1.0));
  CHECK_THROWS_AS(series_bound(VectorXd::Ones(2), 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(series_bound(-VectorXd::Ones(2), 1.0, 1.0), DomainError);
}

TEST_CASE("series lemma fuzz in both regimes") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 1000; ++c) {
    VectorXd a(20);
    for (Index j = 0; j < 20; ++j) a(j) = 10.0 * u(rng);
    const double xi = 0.01 + u(rng);
    for (double alpha : {0.3, 1.0, 1.7}) {
      const SeriesBound b = series_bound(a, xi, alpha);
      CHECK(b.lhs <= b.rhs);
      if (b.majorant) CHECK(b.rhs <= *b.majorant);
    }
    const double mid = series_bound(a, xi, 1.0).rhs;
    CHECK(std::abs(series_bound(a, xi, 1.0 + 1e-6).rhs - mid) <= 1e-4 * mid);
    CHECK(std::abs(series_bound(a, xi, 1.0 - 1e-6).rhs - mid) <= 1e-4 * mid);
  }
}

TEST_CASE("Lambert W lower branch against reference values") {
  CHECK(lambert_w_m1(-std::exp(-1.0)) == -1.0);
  // Reference values from 40-digit arithmetic.
  CHECK(lambert_w_m1(-0.05) == doctest::Approx(-4.499755288523487535974733).epsilon(1e-14));
  CHECK(lambert_w_m1(-0.3) == doctest::Approx(-1.78133702342162761197417).epsilon(1e-14));
  CHECK(lambert_w_m1(-0.36) == doctest::Approx(-1.222770133978505953142938).epsilon(1e-12));
  CHECK(lambert_w_m1(-1e-6) == doctest::Approx(-16.62650890137247338770643).epsilon(1e-14));
  CHECK(lambert_w_m1_log(std::log(1e-300)) ==
        doctest::Approx(-697.3227762954601609954075).epsilon(1e-14));
  CHECK_THROWS_AS(lambert_w_m1(0.0), DomainError);
  CHECK_THROWS_AS(lambert_w_m1(-0.5), DomainError);
  CHECK_THROWS_AS(lambert_w_m1(0.1), DomainError);
}

TEST_CASE("Lambert W agrees with Boost and has tiny residuals") {
  const double branch = -std::exp(-1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = branch + 1e-9 + (-1e-12 - branch - 1e-9) * i / 999.0;
    const double w = lambert_w_m1(x);
    CHECK(w <= -1.0);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::abs(x));
    const double ref = boost::math::lambert_wm1(x);
    // Near the branch point W is ill-conditioned; compare through the residual there.
    if (x > branch + 1e-4) CHECK(w == doctest::Approx(ref).epsilon(1e-12));
  }
  for (double l : {-1.0, -5.0, -50.0, -700.0, -701.0, -1e4}) {
    const double w = lambert_w_m1_log(l);
    CHECK(w + std::log(-w) == doctest::Approx(l).epsilon(1e-14));
  }
}

TEST_CASE("Lambert W bound on a log grid") {
  for (int i = 0; i <= 300; ++i) {
    const double x = std::pow(10.0, -3.0 + 6.0 * i / 300.0);
    CHECK(std::abs(lambert_w_m1_log(-x - 1.0)) <= 1.0 + std::sqrt(2.0 * x) + x);
  }
}

TEST_CASE("kappa_2 third term regression") {
  const TheoryParams p = example_params();
  // (1/(2*0.01)) * (8*1*2/0.1)^2 * |W_{-1}(-0.1*0.01/(8*2))|^2 in 40-digit arithmetic.
  CHECK(kappa2_lambert_term(p) == doctest::Approx(189895802.7774553276527089).epsilon(1e-12));
  CHECK(kappa_constants(p, 0.5) == doctest::Approx(189895802.7774553276527089).epsilon(1e-12));
}

TEST_CASE("kappa_1 and kappa_3 regressions and finiteness near one half") {
  const TheoryParams p = example_params();
  CHECK(kappa_constants(p, 0.49) == doctest::Approx(2244620057.8738896669).epsilon(1e-10));
  CHECK(kappa_constants(p, 0.25) == doctest::Approx(65536000000.0).epsilon(1e-10));
  CHECK(kappa_constants(p, 0.51) == doctest::Approx(404648442.98792365894).epsilon(1e-10));
  CHECK(kappa_constants(p, 0.75) == doctest::Approx(226060880000000000.0).epsilon(1e-10));
  for (double mu : {0.01, 0.2, 0.49, 0.5, 0.51, 0.8, 0.99}) {
    const double k = kappa_constants(p, mu);
    CHECK(k >= p.sigma);
    if (mu >= 0.2 && mu <= 0.8) CHECK(std::isfinite(k));
  }
  CHECK_THROWS_AS(kappa_constants(p, 0.005), DomainError);
  CHECK_THROWS_AS(kappa_constants(p, 0.995), DomainError);
  TheoryParams noL = p;
  noL.L.reset();
  CHECK_THROWS_AS(kappa_constants(noL, 0.5), CapabilityError);
}

TEST_CASE("ming threshold") {
  TheoryParams p = example_params();
  CHECK(ming_threshold(p, 0.01, 0.0005, 0.1) ==
        doctest::Approx(std::pow(2.0 / (0.01 * 0.0005), 10.0)));
  p.L = 0.0;
  p.tau = 1.0;
  CHECK(ming_threshold(p, 1.0, 0.5, 0.5) == doctest::Approx(4.0));
  CHECK_THROWS_AS(ming_threshold(p, 1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(ming_threshold(p, 1.0, 0.0, 0.5), DomainError);
}

TEST_CASE("envelope and decrease checks on trivial traces") {
  const ProblemInstance r = make_problem("tridia", 10);
  // Start at the minimizer: one terminal record, ||g_0|| tiny.
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(r.hessian(r.x0));
  const VectorXd g0 = r.gradient(VectorXd::Zero(10));
  const VectorXd xs = eig.eigenvectors() *
                      (eig.eigenvectors().transpose() * -g0).cwiseQuotient(eig.eigenvalues());
  ProblemInstance p = r;
  p.x0 = xs;
  Astr1Config cfg = configure(make_method("adagrad"));
  cfg.instrument_f = true;
  const IterationTrace t = astr1_run(p, cfg);
  REQUIRE(t.records.size() == 1);
  const TheoryParams tp = theory_params(p, cfg);
  const EnvelopeReport e = envelope_check(t, kappa_constants(tp, 0.5));
  CHECK(e.ok());
  CHECK(e.max_ratio == doctest::Approx(t.final_normg * t.final_normg / e.kappa));
  CHECK(decrease_check(t, tp, 0.1).checked == 0);
  CHECK(decrease_check(t, tp, 0.1).max_violation == 0.0);
}

TEST_CASE("decrease inequality on an instrumented quadratic run") {
  const ProblemInstance p = make_problem("tridia", 10);
  for (const char* name : {"adagrad", "maxg", "adagbfgs3"}) {
    Astr1Config cfg = configure(make_method(name));
    cfg.instrument_f = true;
    const IterationTrace t = astr1_run(p, cfg);
    const TheoryParams tp = theory_params(p, cfg);
    const DecreaseReport d = decrease_check(t, tp, decrease_sigma_min(cfg.scaling, p.n));
    CHECK(d.checked == t.iterations);
    CHECK(d.max_violation <= 1e-8);
  }
  Astr1Config plain = configure(make_method("adagrad"));
  plain.max_iter = 3;
  const IterationTrace t = astr1_run(p, plain);
  CHECK_THROWS_AS(decrease_check(t, theory_params(p, plain), 0.1), CapabilityError);
  CHECK_THROWS_AS(theory_params(make_problem("rosenbr"), plain), CapabilityError);
}

TEST_CASE("verification suites pass") {
  for (const std::string& name : suite_names()) {
    INFO(name);
    CHECK(run_suite(name).passed);
  }
  CHECK_THROWS_AS(run_suite("nope"), CatalogError);
}
