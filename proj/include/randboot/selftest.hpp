#pragma once

#include <string>
#include <vector>

namespace randboot::selftest {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast cross-validation of the numerical core against independent oracles
// (enumeration, grid search, closed forms) plus determinism guarantees.
// `corrupt` names a check whose sampler is deliberately biased, as a
// negative control that the check can actually fail.
std::vector<CheckResult> run_all(const std::string& corrupt = "");

}  // namespace randboot::selftest
