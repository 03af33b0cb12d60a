#include "doctest.h"

#include <random>

#include "offo/model.hpp"

using namespace offo;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Textbook dense BFGS recursion on sigma I.
MatrixXd dense_bfgs(double sigma, const std::vector<std::pair<VectorXd, VectorXd>>& pairs,
                    Index n) {
  MatrixXd B = sigma * MatrixXd::Identity(n, n);
  for (const auto& [s, y] : pairs) {
    const VectorXd Bs = B * s;
    B += y * y.transpose() / y.dot(s) - Bs * Bs.transpose() / s.dot(Bs);
  }
  return B;
}

struct RandomPairs {
  std::vector<std::pair<VectorXd, VectorXd>> pairs;
};

RandomPairs random_pairs(Index n, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  MatrixXd A(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = z(rng);
  const MatrixXd H = A * A.transpose() + MatrixXd::Identity(n, n);
  RandomPairs out;
  for (int k = 0; k < count; ++k) {
    VectorXd s(n);
    for (Index i = 0; i < n; ++i) s(i) = z(rng);
    out.pairs.emplace_back(s, H * s);
  }
  return out;
}

}  // namespace

TEST_CASE("zero model") {
  HessianModel m(ModelKind::Zero);
  CHECK(m.is_zero());
  CHECK(apply(m, vec({1, 2, 3})).isZero(0.0));
  CHECK(norm_estimate(m) == 0.0);
  m.absorb(vec({1, 0}), vec({2, 0}));
  CHECK(m.accepted_pairs() == 0);
}

TEST_CASE("Barzilai-Borwein scale") {
  HessianModel m(ModelKind::BBDiag);
  CHECK(m.bb_scale() == 1.0);
  m = update(m, vec({1, 0}), vec({2, 0}));
  CHECK(m.bb_scale() == 0.5);
  CHECK(norm_estimate(m) == 0.5);
  CHECK(apply(m, vec({2, 4})) == vec({1, 2}));
  m = update(m, vec({1, 0}), vec({-1, 0}));
  CHECK(m.bb_scale() == 0.5);
  CHECK(m.rejected_pairs() == 1);
  // Curvature below the 1e-15 safeguard is rejected as well.
  m = update(m, vec({1, 0}), vec({1e-16, 5}));
  CHECK(m.bb_scale() == 0.5);
  CHECK(m.rejected_pairs() == 2);
}

TEST_CASE("LBFGS keeps the newest pairs") {
  HessianModel m(ModelKind::LBFGS, 1e5, 3);
  const RandomPairs rp = random_pairs(6, 4, 1);
  for (const auto& [s, y] : rp.pairs) m.absorb(s, y);
  CHECK(m.pair_count() == 3);
  CHECK(m.accepted_pairs() == 4);
  std::vector<std::pair<VectorXd, VectorXd>> last(rp.pairs.begin() + 1, rp.pairs.end());
  const MatrixXd oracle = dense_bfgs(m.bb_scale(), last, 6);
  CHECK((m.dense(6) - oracle).norm() <= 1e-10 * oracle.norm());
}

TEST_CASE("LBFGS secant equation and symmetry") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    HessianModel m(ModelKind::LBFGS, 1e5, 3);
    const RandomPairs rp = random_pairs(5, 1 + seed % 4, seed);
    for (const auto& [s, y] : rp.pairs) m.absorb(s, y);
    const auto& [s, y] = rp.pairs.back();
    CHECK((m.apply(s) - y).norm() <= 1e-8 * y.norm());
    std::mt19937 rng(seed + 100);
    std::normal_distribution<double> z(0.0, 1.0);
    VectorXd u(5), v(5);
    for (Index i = 0; i < 5; ++i) {
      u(i) = z(rng);
      v(i) = z(rng);
    }
    const double a = u.dot(m.apply(v)), b = v.dot(m.apply(u));
    CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), 1.0));
    // Linearity.
    CHECK((m.apply(2.0 * u + v) - 2.0 * m.apply(u) - m.apply(v)).norm() <=
          1e-10 * (1.0 + m.apply(u).norm()));
  }
}

TEST_CASE("LBFGS norm is the exact spectral norm") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    HessianModel m(ModelKind::LBFGS, 1e5, 3);
    for (const auto& [s, y] : random_pairs(7, 3, seed).pairs) m.absorb(s, y);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m.dense(7));
    CHECK(m.norm_estimate() ==
          doctest::Approx(eig.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("rejected pairs leave the operator unchanged") {
  HessianModel m(ModelKind::LBFGS, 1e5, 3);
  for (const auto& [s, y] : random_pairs(4, 2, 9).pairs) m.absorb(s, y);
  const MatrixXd before = m.dense(4);
  m.absorb(vec({1, 0, 0, 0}), vec({-1, 0, 0, 0}));
  CHECK(m.dense(4) == before);
}

TEST_CASE("kappa_B is enforced by rescaling") {
  HessianModel m(ModelKind::BBDiag, 10.0);
  m.absorb(vec({1, 0}), vec({0.01, 0}));
  CHECK(m.raw_norm() == doctest::Approx(100.0));
  CHECK(m.norm_estimate() == doctest::Approx(10.0));
  CHECK(m.apply(vec({1, 1})) == vec({10, 10}));

  HessianModel e(ModelKind::Exact, 5.0);
  MatrixXd H(2, 2);
  H << 20, 0, 0, -2;
  e.set_hessian(H);
  CHECK(e.norm_estimate() == doctest::Approx(5.0));
  CHECK(e.apply(vec({0, 1}))(1) == doctest::Approx(-0.5));
}

TEST_CASE("exact model on tridia") {
  const ProblemInstance p = make_problem("tridia", 10);
  HessianModel m(ModelKind::Exact);
  CHECK_THROWS_AS(m.apply(VectorXd::Ones(10)), CapabilityError);
  const VectorXd v = VectorXd::LinSpaced(10, -1, 1);
  CHECK(apply(m, v, p, p.x0) == p.hessian(p.x0) * v);
  m.set_hessian(p.hessian(VectorXd::Constant(10, 0.3)));
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.hessian(p.x0));
  CHECK(norm_estimate(m) == doctest::Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-6));
}

TEST_CASE("model names") {
  Index mem = 0;
  CHECK(parse_model_kind("none") == ModelKind::Zero);
  CHECK(parse_model_kind("bb") == ModelKind::BBDiag);
  CHECK(parse_model_kind("exact") == ModelKind::Exact);
  CHECK(parse_model_kind("lbfgs3", &mem) == ModelKind::LBFGS);
  CHECK(mem == 3);
  CHECK(parse_model_kind("lbfgs5", &mem) == ModelKind::LBFGS);
  CHECK(mem == 5);
  CHECK_THROWS_AS(parse_model_kind("sr1"), CatalogError);
  CHECK_THROWS_AS(HessianModel(ModelKind::BBDiag, 0.5), DomainError);
}
