// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <iostream>

#include "desk/cli/suite.hpp"

int main() {
  desk::RunConfig cfg;
  try {
    cfg = desk::default_config();
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
  int failed = 0;
  for (int k = 1; k <= desk::kCriteria; ++k) {
    desk::Check c = desk::run_criterion(k, cfg);
    bool pass = c.verdict == desk::verdict::pass;
    failed += !pass;
    std::printf("AC%-2d %s  %s  (%.2f s)\n", k, pass ? "PASS" : "FAIL", desk::criterion_title(k).c_str(), c.seconds);
    if (!pass) std::printf("      %s\n", c.detail.dump().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", desk::kCriteria - failed, desk::kCriteria);
  return failed ? 1 : 0;
}
