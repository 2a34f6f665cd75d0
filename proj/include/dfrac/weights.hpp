#pragma once

#include <string>
#include <vector>

#include "dfrac/sequence.hpp"

namespace dfrac {

enum class WeightKind { n_factorial, factorial, geometric, custom };

/// Which weight h to use: n n!, n!, r^n or an explicit array.
struct WeightSpec {
  WeightKind kind = WeightKind::n_factorial;
  double ratio = 2.0;          // geometric only
  std::vector<double> values;  // custom only, h(0..N)

  static WeightSpec parse(const std::string& name);
};

/// Weighted sup-norm space l_h^inf on the window 0..N.
struct WeightedSpace {
  std::vector<double> log_h;   // ln h(n); -inf on the zero set
  std::vector<int> zero_set;   // indices with h(n) = 0
  std::vector<double> ratios;  // (1/h(n)) sum_{k=0}^{n-2} h(k); 0 on the zero set
  double H = 0.0;              // max of ratios over the window
  int argmax = 0;
  /// Finite-window heuristic: ratios decrease over the last half of the
  /// window and r(N) < r(4)/10.
  bool admissible = false;

  int horizon() const { return static_cast<int>(log_h.size()) - 1; }
};

WeightedSpace admissibility(const WeightSpec& spec, int N);

/// sup over n outside the zero set of ||u(n)|| / h(n); +inf when u does not
/// vanish on the zero set.
double weighted_norm(const VecSeq& u, const WeightedSpace& w);

}  // namespace dfrac
