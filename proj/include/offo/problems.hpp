#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "offo/errors.hpp"

namespace offo {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Smooth objective with analytic derivatives. Implementations are pure.
class Objective {
 public:
  virtual ~Objective() = default;

  /// Fills f, and g / H when the pointers are non-null. H is dense symmetric.
  virtual void evaluate(const VectorXd& x, double& f, VectorXd* g, MatrixXd* H) const = 0;

  virtual bool has_hessian() const { return true; }
};

struct Evaluation {
  double f = 0.0;
  std::optional<VectorXd> g;
  std::optional<MatrixXd> H;
};

/// A named test problem with its standard starting point.
struct ProblemInstance {
  std::string name;
  Index n = 0;
  VectorXd x0;
  double f_low = 0.0;
  std::optional<double> lipschitz_hint;
  bool lipschitz_exact = false;
  bool sum_of_squares = false;
  std::shared_ptr<const Objective> objective;

  double value(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;
  MatrixXd hessian(const VectorXd& x) const;
  bool has_hessian() const { return objective && objective->has_hessian(); }
};

/// Evaluates derivatives up to `order` (0, 1 or 2).
/// Throws NonFiniteError on overflow, CapabilityError for order 2 without a Hessian.
Evaluation evaluate(const ProblemInstance& problem, const VectorXd& x, int order);

/// Builds a catalog problem. Throws CatalogError / DimensionError.
ProblemInstance make_problem(const std::string& name, Index n);

/// Same, at the family's default dimension.
ProblemInstance make_problem(const std::string& name);

/// Names of all catalog families, in catalog order.
const std::vector<std::string>& problem_names();

Index default_dimension(const std::string& name);

/// Problems whose objective is quadratic, so the gradient Lipschitz constant is exact.
std::vector<std::string> exact_lipschitz_problem_names();

/// Wraps an arbitrary objective as a problem instance.
ProblemInstance make_custom_problem(std::string name, VectorXd x0, double f_low,
                                    std::shared_ptr<const Objective> objective);

/// Sampled estimate of max ||g(x)-g(y)|| / ||x-y|| over a unit box around the start point.
double estimate_lipschitz(const ProblemInstance& problem, int pairs = 20, unsigned seed = 7);

/// JSON object with name, n, x0 and f_low.
std::string problem_to_json(const ProblemInstance& problem);

}  // namespace offo
