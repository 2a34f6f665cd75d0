#pragma once

#include <vector>

#include "dfrac/checks.hpp"

namespace dfrac {

inline constexpr int kCriteriaCount = 15;

/// Runs acceptance criterion `id` (1..14); criterion 15 is the wall-clock
/// budget of the whole suite and is produced by run_selftest.
CheckResult run_criterion(int id, unsigned long long seed = 0);

/// All criteria in order, timing each; the last entry checks the total.
std::vector<CheckResult> run_selftest(unsigned long long seed = 0);

}  // namespace dfrac
