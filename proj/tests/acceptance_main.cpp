#include <cstdio>

#include "nsk/acceptance.hpp"

int main() {
  int failed = 0;
  for (int id = 1; id <= 10; ++id) {
    const nsk::CriterionResult r = nsk::run_criterion(id);
    std::printf("%s\n", nsk::format_result(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
