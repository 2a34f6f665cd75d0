#pragma once

#include <vector>

namespace dfrac {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n; nodes ascending.
GaussRule gauss_legendre(int n);

/// Cached 16-point rule used by every composite integration in the library.
const GaussRule& gauss_legendre16();

}  // namespace dfrac
