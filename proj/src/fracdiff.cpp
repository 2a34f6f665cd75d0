#include "dfrac/fracdiff.hpp"

#include <string>

#include "dfrac/errors.hpp"

namespace dfrac {

namespace {

void require_difference_order(const FracOrder& order) {
  if (!order.solver_range()) {
    throw DomainError("fractional difference: order must satisfy 1 < alpha <= 2, got " +
                      std::to_string(order.alpha()));
  }
}

void require_horizon(int N, int need, const char* who) {
  if (N < need) {
    throw UsageError(std::string(who) + ": horizon " + std::to_string(N) + " < " + std::to_string(need));
  }
}

// (k * u)(n) for a precomputed kernel of matching length.
VecSeq convolve_kernel(const ScalarSeq& k, const VecSeq& u) {
  const int N = u.horizon();
  VecSeq out(u.dim(), N);
  for (int n = 0; n <= N; ++n) {
    auto acc = out.state(n);
    for (int j = 0; j <= n; ++j) acc += k[n - j] * u.state(j);
  }
  return out;
}

ScalarSeq to_scalar(const VecSeq& u) { return u.component(0); }

}  // namespace

VecSeq frac_sum(double alpha, const VecSeq& u) {
  if (!(alpha > 0.0)) throw DomainError("frac_sum: order must be positive");
  if (u.empty()) throw UsageError("frac_sum: empty sequence");
  return convolve_kernel(cesaro_kernel(alpha, u.horizon()), u);
}

ScalarSeq frac_sum(double alpha, const ScalarSeq& u) {
  return to_scalar(frac_sum(alpha, VecSeq::from_scalar(u)));
}

VecSeq rl_diff(const FracOrder& order, const VecSeq& u) {
  require_difference_order(order);
  require_horizon(u.horizon(), 2, "rl_diff");
  if (order.is_integer()) return forward_diff(u, 2);
  return forward_diff(frac_sum(order.gap(), u), 2);
}

ScalarSeq rl_diff(const FracOrder& order, const ScalarSeq& u) {
  return to_scalar(rl_diff(order, VecSeq::from_scalar(u)));
}

VecSeq caputo_diff(const FracOrder& order, const VecSeq& u) {
  require_difference_order(order);
  require_horizon(u.horizon(), 2, "caputo_diff");
  const VecSeq d2 = forward_diff(u, 2);
  if (order.is_integer()) return d2;
  return frac_sum(order.gap(), d2);
}

ScalarSeq caputo_diff(const FracOrder& order, const ScalarSeq& u) {
  return to_scalar(caputo_diff(order, VecSeq::from_scalar(u)));
}

VecSeq rl_diff_of_conv(const FracOrder& order, const ScalarSeq& u, const VecSeq& v) {
  require_difference_order(order);
  const int N = v.horizon();
  if (horizon(u) != N) throw UsageError("rl_diff_of_conv: u and v must share the horizon");
  require_horizon(N, 4, "rl_diff_of_conv");

  const ScalarSeq du = rl_diff(order, u);  // horizon N - 2
  const double a = order.alpha();
  VecSeq out(v.dim(), N - 2);
  for (int n = 0; n <= N - 2; ++n) {
    auto acc = out.state(n);
    for (int j = 0; j <= n; ++j) acc += du[n - j] * v.state(j);
    acc += (u[1] - a * u[0]) * v.state(n + 1);
    acc += u[0] * v.state(n + 2);
  }
  return out;
}

}  // namespace dfrac
