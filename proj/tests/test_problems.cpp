#include "doctest.h"

#include <random>

#include "offo/noise.hpp"
#include "offo/problems.hpp"

using namespace offo;

namespace {

VectorXd fd_gradient(const ProblemInstance& p, const VectorXd& x, double h = 1e-6) {
  VectorXd g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (p.value(a) - p.value(b)) / (2.0 * h);
  }
  return g;
}

MatrixXd fd_hessian(const ProblemInstance& p, const VectorXd& x, double h = 1e-6) {
  MatrixXd H(x.size(), x.size());
  for (Index i = 0; i < x.size(); ++i) {
    VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    H.col(i) = (p.gradient(a) - p.gradient(b)) / (2.0 * h);
  }
  return H;
}

std::vector<VectorXd> sample_points(const ProblemInstance& p, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<VectorXd> pts{p.x0};
  for (int k = 0; k < count; ++k) {
    VectorXd x = p.x0;
    for (Index i = 0; i < x.size(); ++i) x(i) += u(rng);
    pts.push_back(x);
  }
  return pts;
}

}  // namespace

TEST_CASE("chained Rosenbrock in two dimensions") {
  const ProblemInstance p = make_problem("rosenbr", 2);
  CHECK(p.n == 2);
  CHECK(p.x0(0) == -1.2);
  CHECK(p.x0(1) == 1.0);
  CHECK(p.value(p.x0) == doctest::Approx(24.2).epsilon(1e-14));
  const VectorXd one = VectorXd::Ones(2);
  CHECK(p.gradient(one).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.hessian(one));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("catalog lookups and dimension rules") {
  CHECK(make_problem("broyden3d", 10).n == 10);
  CHECK(make_problem("broyden3d", 1000).n == 1000);
  CHECK_THROWS_AS(make_problem("nosuch", 10), CatalogError);
  CHECK_THROWS_AS(make_problem("beale", 3), DimensionError);
  CHECK_THROWS_AS(make_problem("woods", 10), DimensionError);
  CHECK_THROWS_AS(make_problem("nlminsurf", 10), DimensionError);
  CHECK(problem_names().size() >= 16);
  for (const std::string& name : problem_names()) {
    const ProblemInstance p = make_problem(name);
    CHECK(p.x0.size() == p.n);
    CHECK(p.n == default_dimension(name));
  }
}

TEST_CASE("gradients match central differences at x0 and nearby points") {
  for (const std::string& name : problem_names()) {
    const ProblemInstance p = make_problem(name);
    for (const VectorXd& x : sample_points(p, 10, 3)) {
      const VectorXd g = p.gradient(x);
      const VectorXd fd = fd_gradient(p, x);
      INFO(name);
      CHECK((g - fd).norm() <= 1e-5 * (1.0 + g.norm()));
    }
  }
}

TEST_CASE("Hessians match differences of the gradient") {
  for (const std::string& name : problem_names()) {
    const ProblemInstance p = make_problem(name);
    if (!p.has_hessian()) continue;
    for (const VectorXd& x : sample_points(p, 5, 11)) {
      const MatrixXd H = p.hessian(x);
      INFO(name);
      CHECK((H - H.transpose()).norm() == 0.0);
      CHECK((H - fd_hessian(p, x)).norm() <= 1e-4 * (1.0 + H.norm()));
    }
  }
}

TEST_CASE("sum-of-squares problems stay above f_low") {
  for (const std::string& name : problem_names()) {
    const ProblemInstance p = make_problem(name);
    if (!p.sum_of_squares) continue;
    for (const VectorXd& x : sample_points(p, 50, 5)) {
      INFO(name);
      CHECK(p.value(x) >= p.f_low);
    }
  }
}

TEST_CASE("quadratics carry their exact Lipschitz constant") {
  const ProblemInstance p = make_problem("tridia", 10);
  REQUIRE(p.lipschitz_exact);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.hessian(VectorXd::Zero(10)));
  CHECK(*p.lipschitz_hint == doctest::Approx(eig.eigenvalues().cwiseAbs().maxCoeff()));
  // Stationary point from a dense solve: the gradient is affine.
  const VectorXd g0 = p.gradient(VectorXd::Zero(10));
  const VectorXd xs = eig.eigenvectors() *
                      (eig.eigenvectors().transpose() * -g0).cwiseQuotient(eig.eigenvalues());
  CHECK(p.gradient(xs).norm() <= 1e-10);
  for (const std::string& name : exact_lipschitz_problem_names()) {
    CHECK(make_problem(name).lipschitz_exact);
  }
  CHECK_FALSE(make_problem("rosenbr").lipschitz_exact);
}

TEST_CASE("evaluate reports orders and errors") {
  const ProblemInstance p = make_problem("rosenbr", 2);
  const Evaluation e0 = evaluate(p, p.x0, 0);
  CHECK_FALSE(e0.g.has_value());
  const Evaluation e2 = evaluate(p, p.x0, 2);
  REQUIRE(e2.g.has_value());
  REQUIRE(e2.H.has_value());
  CHECK_THROWS_AS(evaluate(p, VectorXd::Zero(3), 1), DimensionError);
  CHECK_THROWS_AS(p.value(VectorXd::Constant(2, 1e200)), NonFiniteError);
}

TEST_CASE("problem JSON dump") {
  const std::string js = problem_to_json(make_problem("beale"));
  CHECK(js.find("\"name\"") != std::string::npos);
  CHECK(js.find("\"x0\"") != std::string::npos);
  CHECK(js.find("\"f_low\"") != std::string::npos);
}

TEST_CASE("noise at level zero is the identity") {
  const ProblemInstance p = make_problem("rosenbr", 10);
  NoisyOracle off{&p, 0.0, 42};
  CHECK(apply_noise(off, 3.5, 7) == 3.5);
  Oracle clean(p, 0.0, 9);
  const VectorXd x = p.x0 * 0.3;
  CHECK(clean.gradient(x) == p.gradient(x));
  CHECK(clean.value(x) == p.value(x));
  CHECK(clean.hessian(x) == p.hessian(x));
}

TEST_CASE("noise is deterministic in seed and position") {
  const ProblemInstance p = make_problem("rosenbr", 10);
  NoisyOracle on{&p, 0.15, 1234};
  CHECK(apply_noise(on, 2.0, 5) == apply_noise(on, 2.0, 5));
  CHECK(apply_noise(on, 2.0, 5) != apply_noise(on, 2.0, 6));
  const VectorXd v = VectorXd::LinSpaced(10, 1.0, 2.0);
  CHECK(apply_noise(on, v, 3) == apply_noise(on, v, 3));
  Oracle a(p, 0.15, 77), b(p, 0.15, 77), c(p, 0.15, 78);
  const VectorXd ga = a.gradient(p.x0);
  CHECK(ga == b.gradient(p.x0));
  CHECK(ga != c.gradient(p.x0));
  CHECK(a.gradient(p.x0) != ga);  // the stream advances
  CHECK(a.gradient_calls() == 2);
  CHECK(a.value_calls() == 0);
}

TEST_CASE("noise has the requested relative spread") {
  const ProblemInstance p = make_problem("rosenbr", 2);
  NoisyOracle on{&p, 0.5, 2024};
  const int N = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < N; ++i) {
    const double v = apply_noise(on, 1.0, static_cast<std::uint64_t>(i));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / N;
  const double sd = std::sqrt(sq / N - mean * mean);
  CHECK(std::abs(mean - 1.0) <= 0.01);
  CHECK(std::abs(sd - 0.5) <= 0.01);
}

TEST_CASE("Hessian noise keeps symmetry") {
  const ProblemInstance p = make_problem("tridia", 10);
  Oracle o(p, 0.25, 3);
  const MatrixXd H = o.hessian(p.x0);
  CHECK((H - H.transpose()).norm() == 0.0);
  CHECK(H != p.hessian(p.x0));
}

TEST_CASE("sampled Lipschitz estimates are positive and reproducible") {
  const ProblemInstance p = make_problem("rosenbr", 10);
  const double a = estimate_lipschitz(p);
  CHECK(a > 0.0);
  CHECK(a == estimate_lipschitz(p));
}
