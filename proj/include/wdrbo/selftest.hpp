#pragma once

#include <string>
#include <vector>

namespace wdrbo {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast subset of the property checks, run by `wdrbo selftest`.
std::vector<CheckResult> run_selftest();

}  // namespace wdrbo
