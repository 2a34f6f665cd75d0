#pragma once

#include "dfrac/kernels.hpp"
#include "dfrac/sequence.hpp"

namespace dfrac {

// Fractional sums and differences of sequences. Orders 1 < alpha < 2 consume
// two trailing indices: an input of horizon N + 2 yields an output of
// horizon N. alpha = 2 is routed to the exact second forward difference.

/// Delta^{-alpha} u = k^alpha * u, same horizon as u.
VecSeq frac_sum(double alpha, const VecSeq& u);
ScalarSeq frac_sum(double alpha, const ScalarSeq& u);

/// Riemann-Liouville difference Delta^2 (k^{2-alpha} * u), horizon N - 2.
VecSeq rl_diff(const FracOrder& order, const VecSeq& u);
ScalarSeq rl_diff(const FracOrder& order, const ScalarSeq& u);

/// Caputo difference k^{2-alpha} * (Delta^2 u), horizon N - 2.
VecSeq caputo_diff(const FracOrder& order, const VecSeq& u);
ScalarSeq caputo_diff(const FracOrder& order, const ScalarSeq& u);

/// Delta^alpha (u * v) evaluated through the convolution rule
///   (Delta^alpha u * v)(n) + (u(1) - alpha u(0)) v(n+1) + u(0) v(n+2).
/// Second evaluation path for cross-checking rl_diff(conv(u, v)).
VecSeq rl_diff_of_conv(const FracOrder& order, const ScalarSeq& u, const VecSeq& v);

}  // namespace dfrac
