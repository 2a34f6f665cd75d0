#pragma once

#include <complex>

#include "dfrac/sequence.hpp"

namespace dfrac {

/// Fractional order alpha with ceiling m and gap m - alpha.
class FracOrder {
 public:
  explicit FracOrder(double alpha);

  double alpha() const { return alpha_; }
  int m() const { return m_; }
  double gap() const { return gap_; }
  bool is_integer() const { return gap_ == 0.0; }
  /// True when 1 < alpha <= 2, the range every solver accepts.
  bool solver_range() const { return alpha_ > 1.0 && alpha_ <= 2.0; }

 private:
  double alpha_;
  int m_;
  double gap_;
};

/// Cesàro kernel k^beta(0..N) = Gamma(beta + n) / (Gamma(beta) Gamma(n + 1)),
/// evaluated by k(0) = 1, k(n + 1) = k(n) (beta + n) / (n + 1).
/// Valid for beta in (-1, 0) ∪ (0, ∞).
ScalarSeq cesaro_kernel(double beta, int N);

/// Finite Cauchy convolution (u * v)(n) = sum_{j<=n} u(n - j) v(j).
/// Both inputs must share the same horizon.
ScalarSeq conv(const ScalarSeq& u, const ScalarSeq& v);

/// Partial Z-transform sum_{j=0}^{J} z^{-j} u(j).
std::complex<double> ztrans_partial(const ScalarSeq& u, std::complex<double> z, int J);

/// m-th forward difference; output has horizon N - m.
ScalarSeq forward_diff(const ScalarSeq& u, int m);
VecSeq forward_diff(const VecSeq& u, int m);

/// Two-parameter Mittag-Leffler function E_{a,b}(z) for real z by its
/// power series with log-Gamma terms. Negative arguments throw
/// ConvergenceError when the alternating terms outgrow the result by more
/// than 1e4, and DomainError below -50.
double mittag_leffler(double a, double b, double z);

}  // namespace dfrac
