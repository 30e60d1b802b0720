// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <algorithm>
#include <iostream>

#include "lcmetrics/harness.hpp"

int main() {
  const auto results = lcm::run_acceptance({}, std::cout);
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  std::cout << passed << "/" << results.size() << " criteria pass\n";
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}
