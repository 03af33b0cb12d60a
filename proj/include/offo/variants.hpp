#pragma once

#include <string>
#include <vector>

#include "offo/solver.hpp"

namespace offo {

/// A named algorithm: an ASTR1 configuration, or the steepest-descent baseline.
struct Method {
  std::string name;
  bool is_sdba = false;
  ScalingRule scaling;
  ModelKind model = ModelKind::Zero;
  Index lbfgs_memory = 3;
  Geometry geometry = Geometry::Box;
};

/// Looks up a variant by name (adagrad, adagnorm, adam, ..., adagHs, sdba).
/// An "s" suffix selects theta = sqrt(n); "norm" selects aggregated scaling in the Ball.
/// Throws CatalogError for unknown names.
Method make_method(const std::string& name);

/// All variant names, in table order.
const std::vector<std::string>& method_names();

/// ASTR1 config for a method on top of `base` (tolerances, trace level, ...).
Astr1Config configure(const Method& method, Astr1Config base = {});

/// True for every method except sdba: derivative-only.
bool is_offo(const Method& method);

}  // namespace offo
