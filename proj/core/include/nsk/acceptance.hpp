#pragma once

#include <string>
#include <vector>

namespace nsk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

/// Runs one acceptance criterion (1..10). Fixtures are built internally;
/// a criterion passes only if its checks hold and it finishes within its
/// time limit.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_acceptance();

/// "PASS  3  min curve ...  (0.01 s)"
std::string format_result(const CriterionResult& r);

}  // namespace nsk
