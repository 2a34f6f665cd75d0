#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dfrac/checks.hpp"
#include "dfrac/sequence.hpp"

namespace dfrac {

/// Result of one worked example: the emitted solution, its grid, scalar
/// diagnostics and the verifications performed along the way.
struct ExampleOutput {
  std::string name;
  VecSeq solution;
  std::vector<double> grid;
  std::vector<std::pair<std::string, double>> stats;
  CheckResult checks;
};

/// Delta^alpha u = u_xx(n+2) + sin(n)/(1+n^3) u/(1 + ||u||_{L2}) on (0, pi)
/// with zero data (solution 0), then the same equation with the source
/// sin(x)/(1+n) added so that the emitted solution is nontrivial.
ExampleOutput heat_example(int dim, double alpha, int steps);

/// alpha = 2 with the multiplication operator m(x) = 0.1 + 0.3x on (0, 1),
/// checked against the closed-form sine-family subordination.
ExampleOutput multiplication_example(int dim, int steps);

/// Delta^2 u = (B + 2 gamma) u(n+1) + g(n) on (pi, 2pi) with
/// B = 2(1/(1+x) - (1+gamma)), solved through T = -x.
ExampleOutput shifted_example(int dim, int steps, double gamma = 0.5);

/// Chebyshev recurrences as Delta^2 u = 2(x-1) u(n+1) on a grid in (0, 1].
ExampleOutput chebyshev_example(int dim, int steps);

/// Dispatch by name: heat, multiplication, shifted, chebyshev.
ExampleOutput run_example(const std::string& name, int dim, double alpha, int steps);

}  // namespace dfrac
