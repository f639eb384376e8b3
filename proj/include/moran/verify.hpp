#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "moran/report_io.hpp"

namespace moran {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;
  Json details;
  double seconds = 0.0;
};

/// recursion, tree, asymptotics, lumping, limit
const std::vector<std::string>& suite_names();

/// Runs one deterministic invariant suite. Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(std::string_view name);

}  // namespace moran
