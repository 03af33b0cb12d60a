#pragma once

#include <string>
#include <vector>

namespace offo {

/// Outcome of a numerical verification suite, with a JSON report of the details.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string summary;  ///< one line for humans
  std::string report;   ///< JSON object
};

/// series | lambert | envelope | decrease | ming. Throws CatalogError for unknown names.
SuiteResult run_suite(const std::string& name);

const std::vector<std::string>& suite_names();

}  // namespace offo
