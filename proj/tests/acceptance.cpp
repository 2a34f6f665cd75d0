// Runs every acceptance criterion at its stated tolerance and prints one
// pass/fail line per criterion. Exit status 0 iff all pass.
#include <cstdio>

#include "dfrac/selftest.hpp"
#include "dfrac/solver.hpp"

int main() {
  const auto results = dfrac::run_selftest(dfrac::default_seed());
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", r.summary().c_str());
    if (!r.passed()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 && results.size() == static_cast<std::size_t>(dfrac::kCriteriaCount) ? 0 : 1;
}
