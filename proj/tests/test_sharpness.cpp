#include "doctest.h"

#include <boost/math/special_functions/zeta.hpp>

#include "offo/sharpness.hpp"

using namespace offo;

TEST_CASE("zeta against reference values and Boost") {
  // 25-digit references.
  CHECK(riemann_zeta(1.02) == doctest::Approx(50.5786700410156032176133).epsilon(1e-13));
  CHECK(riemann_zeta(1.5) == doctest::Approx(2.612375348685488343348568).epsilon(1e-14));
  CHECK(riemann_zeta(2.0) == doctest::Approx(1.644934066848226436472415).epsilon(1e-14));
  CHECK(riemann_zeta(3.0) == doctest::Approx(1.202056903159594285399738).epsilon(1e-14));
  CHECK(riemann_zeta(1.001) == doctest::Approx(1000.577288475901492732042).epsilon(1e-12));
  CHECK(riemann_zeta(7.5) == doctest::Approx(1.005826727536522807702242).epsilon(1e-14));
  for (int i = 1; i <= 200; ++i) {
    const double s = 1.0 + 0.05 * i;
    CHECK(riemann_zeta(s) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(riemann_zeta(1.0), DomainError);
}

TEST_CASE("Thm31 sequence values") {
  const SharpSequence q = build_sequence(SharpKind::Thm31, SharpParams{}, 100);
  CHECK(q.g.size() == 101);
  CHECK(q.s.size() == 100);
  CHECK(q.g(0) == -2.0);
  CHECK(q.s(0) == doctest::Approx(0.9987523388778446747).epsilon(1e-15));
  CHECK(q.g(5) == doctest::Approx(-std::pow(5.0, -0.51)));
  CHECK(q.f0 == doctest::Approx(4.0 / std::sqrt(4.01) + riemann_zeta(1.02)));
  CHECK(q.x(0) == 0.0);
  double sum = 0.01;
  for (Index k = 0; k < q.K; ++k) {
    sum += q.g(k) * q.g(k);
    CHECK(q.s(k) == doctest::Approx(std::abs(q.g(k)) / std::sqrt(sum)).epsilon(1e-14));
    CHECK(q.x(k + 1) - q.x(k) == doctest::Approx(q.s(k)).epsilon(1e-12));
    CHECK(q.f(k + 1) - q.f(k) - q.g(k) * q.s(k) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(q.f.minCoeff() >= 0.0);
  CHECK(q.f.maxCoeff() <= q.f0 * (1 + 1e-15));
}

TEST_CASE("Thm41 sequence values") {
  const SharpParams p;
  const SharpSequence q = build_sequence(SharpKind::Thm41, p, 200);
  const double zeta = riemann_zeta(2 * p.omega + p.nu);
  CHECK(q.f0 == doctest::Approx(zeta).epsilon(1e-14));
  CHECK(q.kappa_f == doctest::Approx(p.omega));
  for (Index k = 0; k < q.K; ++k) {
    const double kk = static_cast<double>(k + 1);
    CHECK(q.g(k) == doctest::Approx(-std::pow(kk, -p.omega)));
    CHECK(q.w(k) == doctest::Approx(std::pow(kk, p.nu)));
    CHECK(q.s(k) == doctest::Approx(std::pow(kk, -(p.omega + p.nu))).epsilon(1e-14));
    CHECK(std::abs(q.g(k + 1) - q.g(k)) <= p.omega * q.s(k));
    CHECK(q.f(k + 1) - q.f(k) - q.g(k) * q.s(k) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(q.f.minCoeff() > 0.0);
  CHECK(q.f.maxCoeff() <= zeta * (1 + 1e-15));
}

TEST_CASE("parameter domains") {
  CHECK_THROWS_AS(build_sequence(SharpKind::Thm31, SharpParams{}, -1), DomainError);
  SharpParams p;
  p.mu = 1.0;
  CHECK_THROWS_AS(build_sequence(SharpKind::Thm31, p, 5), DomainError);
  p = SharpParams{};
  p.eta = 0.0;
  CHECK_THROWS_AS(build_sequence(SharpKind::Thm31, p, 5), DomainError);
  p = SharpParams{};
  p.omega = 0.4;  // below (1-nu)/2
  CHECK_THROWS_AS(build_sequence(SharpKind::Thm41, p, 5), DomainError);
  p = SharpParams{};
  p.sigma = 0.0;
  CHECK_THROWS_AS(build_sequence(SharpKind::Thm41, p, 5), DomainError);
}

TEST_CASE("admissible data for a range of parameters") {
  for (double mu : {0.3, 0.5, 0.7}) {
    for (double eta : {0.01, 0.2}) {
      SharpParams p;
      p.mu = mu;
      p.eta = eta;
      const Admissibility a = admissibility(build_sequence(SharpKind::Thm31, p, 500));
      CHECK(a.ok());
    }
  }
  for (double nu : {0.05, 0.3, 0.6}) {
    SharpParams p;
    p.nu = nu;
    p.omega = (1 - nu) / 2 + 0.05;
    const Admissibility a = admissibility(build_sequence(SharpKind::Thm41, p, 500));
    CHECK(a.ok());
    CHECK(a.slope_margin > 0.0);
  }
}

TEST_CASE("Hermite interpolant matches data and is C1") {
  for (SharpKind kind : {SharpKind::Thm31, SharpKind::Thm41}) {
    const SharpSequence q = build_sequence(kind, SharpParams{}, 300);
    const HermiteInterpolant h = hermite_build(q);
    CHECK(h.intervals() == q.K);
    double max_gap = 0.0;
    for (Index k = 0; k <= q.K; ++k) {
      double f, g, c;
      h.eval1(q.x(k), f, g, c);
      CHECK(f == doctest::Approx(q.f(k)).epsilon(1e-13));
      CHECK(g == doctest::Approx(q.g(k)).epsilon(1e-13));
      if (k > 0 && k < q.K) {
        double fl, gl, cl, fr, gr, cr;
        const double dx = 1e-9 * std::max(1.0, std::abs(q.x(k)));
        h.eval1(q.x(k) - dx, fl, gl, cl);
        h.eval1(q.x(k) + dx, fr, gr, cr);
        max_gap = std::max(max_gap, std::abs(gr - gl) - (std::abs(cl) + std::abs(cr)) * dx);
      }
    }
    CHECK(max_gap <= 1e-12);
    for (Index k = 0; k < q.K; ++k) {
      const double hk = q.x(k + 1) - q.x(k);
      const double D = (q.f(k + 1) - q.f(k) - q.g(k) * hk) / (hk * hk);
      const double E = (q.g(k + 1) - q.g(k)) / hk;
      double f, g, c;
      h.eval1(q.x(k) + 0.37 * hk, f, g, c);
      CHECK(std::abs(c) <= 6 * std::abs(D) + 4 * std::abs(E) + 1e-12);
    }
    // Quadratic extension beyond both ends.
    double f, g, c;
    h.eval1(q.x(0) - 1.0, f, g, c);
    CHECK(c == doctest::Approx(q.kappa_f));
    CHECK(f == doctest::Approx(q.f(0) - q.g(0) + 0.5 * q.kappa_f));
    h.eval1(q.x(q.K) + 2.0, f, g, c);
    CHECK(g == doctest::Approx(q.g(q.K) + 2.0 * q.kappa_f));
    VectorXd gv;
    double fv;
    MatrixXd H;
    h.evaluate(VectorXd::Constant(1, q.x(3)), fv, &gv, &H);
    CHECK(gv(0) == doctest::Approx(q.g(3)));
    CHECK(H.rows() == 1);
  }
}

TEST_CASE("inadmissible data is rejected") {
  SharpSequence q = build_sequence(SharpKind::Thm41, SharpParams{}, 10);
  q.kappa_f = 1e-6;
  CHECK_FALSE(admissibility(q).ok());
  CHECK_THROWS_AS(hermite_build(q), ConstructionError);
}

TEST_CASE("replay reproduces the sequence") {
  for (SharpKind kind : {SharpKind::Thm31, SharpKind::Thm41}) {
    for (Index K : {1, 100}) {
      const SharpSequence q = build_sequence(kind, SharpParams{}, K);
      const HermiteInterpolant h = hermite_build(q);
      const ReplayReport r = replay(q, h);
      CHECK(r.ok());
      CHECK(r.trace.iterations == K);
      CHECK(r.trace.status == RunStatus::MaxIter);
      CHECK(r.max_x_deviation <= 1e-10);
      CHECK(r.max_g_deviation <= 1e-10);
      CHECK(r.trace.value_calls == 0);
      const Astr1Config cfg = replay_config(q);
      CHECK(cfg.eps == 0.0);
      CHECK(cfg.max_iter == K);
      CHECK(sharp_problem(q, h).n == 1);
    }
  }
}
