#include "doctest.h"

#include <random>

#include "offo/scaling.hpp"

using namespace offo;

namespace {

VectorXd v1(double a) { return VectorXd::Constant(1, a); }

ScalingRule rule_of(ScalingVariant v) {
  ScalingRule r;
  r.variant = v;
  return r;
}

}  // namespace

TEST_CASE("Adagrad accumulator includes the current gradient") {
  const ScalingRule r;
  ScalingState s = update(initial_state(r, 1), r, v1(1.0));
  CHECK(s.k == 0);
  CHECK(s.acc(0) == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(weights(s, r)(0) == doctest::Approx(1.004987562112089027).epsilon(1e-15));
}

TEST_CASE("Adagrad with a zero gradient history sits at the floor") {
  const ScalingRule r;
  const ScalingState s = update(initial_state(r, 3), r, VectorXd::Zero(3));
  CHECK((weights(s, r).array() == std::sqrt(0.01)).all());
  CHECK(as4_floor(r) == doctest::Approx(0.1));
}

TEST_CASE("Adam decays past gradients") {
  const ScalingRule r = rule_of(ScalingVariant::AdamLike);
  ScalingState s = initial_state(r, 1);
  s = update(s, r, v1(1.0));
  s = update(s, r, v1(0.0));
  CHECK(s.acc(0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(weights(s, r)(0) == doctest::Approx(std::sqrt(0.91)));
  CHECK(as4_floor(r) == doctest::Approx(0.1));
}

TEST_CASE("diminishing max weights") {
  ScalingRule r = rule_of(ScalingVariant::DiminishingMax);
  r.nu = 0.1;
  ScalingState s = initial_state(r, 1);
  s = update(s, r, v1(0.5));
  CHECK(weights(s, r)(0) == doctest::Approx(0.5));
  s = initial_state(r, 1);
  for (double g : {0.2, 0.5, 0.3}) s = update(s, r, v1(g));
  CHECK(s.acc(0) == 0.5);
  CHECK(weights(s, r)(0) == doctest::Approx(0.5 * std::pow(3.0, 0.1)));
  CHECK(as4_floor(r) == doctest::Approx(0.01));
}

TEST_CASE("diminishing average weights") {
  ScalingRule r = rule_of(ScalingVariant::DiminishingAvg);
  ScalingState s = initial_state(r, 1);
  for (double g : {0.2, -0.5, 0.3}) s = update(s, r, v1(g));
  CHECK(weights(s, r)(0) == doctest::Approx((1.0 / 3.0) * std::pow(3.0, 0.1)));
}

TEST_CASE("aggregated weights are shared and use the Euclidean norm") {
  ScalingRule r;
  r.aggregated = true;
  VectorXd g(2);
  g << 3.0, -4.0;
  const ScalingState s = update(initial_state(r, 2), r, g);
  const VectorXd w = weights(s, r);
  CHECK(w(0) == w(1));
  CHECK(w(0) == doctest::Approx(std::sqrt(25.01)));
}

TEST_CASE("theta_auto scales by sqrt(n)") {
  ScalingRule r;
  r.theta_auto = true;
  const ScalingState s = update(initial_state(r, 4), r, VectorXd::Zero(4));
  CHECK(weights(s, r)(0) == doctest::Approx(2.0 * 0.1));
  CHECK(as4_floor(r, 4) == doctest::Approx(0.2));
}

TEST_CASE("vartheta takes the lower endpoint") {
  ScalingRule r;
  r.vartheta = 0.25;
  const ScalingState s = update(initial_state(r, 1), r, v1(1.0));
  CHECK(weights(s, r)(0) == doctest::Approx(0.5 * std::sqrt(1.01)));
}

TEST_CASE("weights respect the AS.4 floor and monotonicity on random histories") {
  std::mt19937 rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  for (ScalingVariant v : {ScalingVariant::AdagradLike, ScalingVariant::AdamLike,
                           ScalingVariant::DiminishingMax, ScalingVariant::DiminishingAvg}) {
    for (bool agg : {false, true}) {
      ScalingRule r = rule_of(v);
      r.aggregated = agg;
      ScalingState s = initial_state(r, 5);
      VectorXd prev_acc;
      VectorXd prev_w;
      for (int k = 0; k < 200; ++k) {
        VectorXd g(5);
        for (Index i = 0; i < 5; ++i) g(i) = z(rng) * std::pow(0.97, k);
        s = update(s, r, g);
        const VectorXd w = weights(s, r);
        CHECK(w.minCoeff() >= as4_floor(r, 5) * (1.0 - 1e-15));
        CHECK((s.acc.array() >= 0.0).all());
        if (agg) CHECK(w.maxCoeff() == w.minCoeff());
        if (k > 0 && v == ScalingVariant::AdagradLike) {
          CHECK((w.array() >= prev_w.array()).all());
        }
        if (k > 0 && v == ScalingVariant::DiminishingMax) {
          CHECK((s.acc.array() >= prev_acc.array()).all());
          // Lower bound theta max[sigma, v] (k+1)^nu holds with equality here.
          CHECK((w.array() >= r.sigma * std::pow(k + 1.0, r.nu) * (1.0 - 1e-15)).all());
        }
        prev_acc = s.acc;
        prev_w = w;
      }
    }
  }
}

TEST_CASE("scaling errors") {
  ScalingRule r;
  CHECK_THROWS_AS(weights(initial_state(r, 2), r), std::logic_error);
  CHECK_THROWS_AS(update(initial_state(r, 2), r, VectorXd::Zero(3)), DimensionError);
  VectorXd bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(update(initial_state(r, 2), r, bad), NonFiniteError);
  r.mu = 1.0;
  CHECK_THROWS_AS(validate(r), DomainError);
  ScalingRule d = rule_of(ScalingVariant::DiminishingMax);
  d.nu = 0.7;
  CHECK_THROWS_AS(validate(d), DomainError);
  ScalingRule sg;
  sg.sigma = 0.0;
  CHECK_THROWS_AS(validate(sg), DomainError);
}

TEST_CASE("per-coordinate floors") {
  ScalingRule r;
  r.sigma_per_coordinate = VectorXd::LinSpaced(3, 0.01, 0.04);
  CHECK(r.sigma_min() == 0.01);
  const ScalingState s = update(initial_state(r, 3), r, VectorXd::Zero(3));
  const VectorXd w = weights(s, r);
  CHECK(w(2) == doctest::Approx(0.2));
  CHECK(w(0) == doctest::Approx(0.1));
}
