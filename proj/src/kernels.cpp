#include "dfrac/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dfrac/errors.hpp"

namespace dfrac {

VecSeq::VecSeq(Eigen::Index dim, int horizon)
    : states_(Eigen::MatrixXd::Zero(dim, horizon + 1)) {
  if (dim < 1 || horizon < 0) throw UsageError("VecSeq: need dim >= 1 and horizon >= 0");
}

VecSeq::VecSeq(Eigen::MatrixXd states) : states_(std::move(states)) {}

VecSeq VecSeq::from_scalar(const ScalarSeq& u) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(u.size()));
  for (std::size_t n = 0; n < u.size(); ++n) m(0, static_cast<Eigen::Index>(n)) = u[n];
  return VecSeq(std::move(m));
}

VecSeq VecSeq::outer(const ScalarSeq& u, const Eigen::VectorXd& x) {
  Eigen::MatrixXd m(x.size(), static_cast<Eigen::Index>(u.size()));
  for (std::size_t n = 0; n < u.size(); ++n) m.col(static_cast<Eigen::Index>(n)) = u[n] * x;
  return VecSeq(std::move(m));
}

ScalarSeq VecSeq::component(Eigen::Index i) const {
  ScalarSeq out(static_cast<std::size_t>(states_.cols()));
  for (Eigen::Index n = 0; n < states_.cols(); ++n) out[static_cast<std::size_t>(n)] = states_(i, n);
  return out;
}

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("fractional order must be a finite positive number, got " +
                      std::to_string(alpha));
  }
  m_ = static_cast<int>(std::ceil(alpha));
  gap_ = static_cast<double>(m_) - alpha;
}

ScalarSeq cesaro_kernel(double beta, int N) {
  if (N < 0) throw UsageError("cesaro_kernel: horizon must be >= 0");
  if (!std::isfinite(beta) || beta == 0.0 || beta <= -1.0) {
    throw DomainError("cesaro_kernel: order must lie in (-1,0) or (0,inf), got " +
                      std::to_string(beta));
  }
  ScalarSeq k(static_cast<std::size_t>(N) + 1);
  k[0] = 1.0;
  for (int n = 0; n < N; ++n) {
    k[n + 1] = k[n] * (beta + n) / (n + 1.0);
  }
  return k;
}

ScalarSeq conv(const ScalarSeq& u, const ScalarSeq& v) {
  if (u.size() != v.size()) {
    throw UsageError("conv: horizons differ (" + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()) + " points)");
  }
  const std::size_t len = u.size();
  ScalarSeq out(len, 0.0);
  for (std::size_t n = 0; n < len; ++n) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) acc += u[n - j] * v[j];
    out[n] = acc;
  }
  return out;
}

std::complex<double> ztrans_partial(const ScalarSeq& u, std::complex<double> z, int J) {
  if (z == std::complex<double>(0.0, 0.0)) throw DomainError("ztrans_partial: z must be nonzero");
  if (J < 0 || J > horizon(u)) throw UsageError("ztrans_partial: truncation index outside 0..N");
  // Horner in w = 1/z, from the top coefficient down.
  const std::complex<double> w = 1.0 / z;
  std::complex<double> acc = 0.0;
  for (int j = J; j >= 0; --j) acc = acc * w + u[static_cast<std::size_t>(j)];
  return acc;
}

namespace {

std::vector<double> signed_binomials(int m) {
  // c[j] = C(m, j) (-1)^{m-j}
  std::vector<double> c(static_cast<std::size_t>(m) + 1);
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    c[j] = ((m - j) % 2 == 0) ? binom : -binom;
    binom = binom * (m - j) / (j + 1.0);
  }
  return c;
}

}  // namespace

ScalarSeq forward_diff(const ScalarSeq& u, int m) {
  if (m < 0) throw UsageError("forward_diff: order must be >= 0");
  const int N = horizon(u);
  if (N < m) throw UsageError("forward_diff: horizon " + std::to_string(N) + " < order " + std::to_string(m));
  const auto c = signed_binomials(m);
  ScalarSeq out(static_cast<std::size_t>(N - m) + 1);
  for (int n = 0; n <= N - m; ++n) {
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) acc += c[j] * u[n + j];
    out[n] = acc;
  }
  return out;
}

VecSeq forward_diff(const VecSeq& u, int m) {
  if (m < 0) throw UsageError("forward_diff: order must be >= 0");
  const int N = u.horizon();
  if (N < m) throw UsageError("forward_diff: horizon " + std::to_string(N) + " < order " + std::to_string(m));
  const auto c = signed_binomials(m);
  VecSeq out(u.dim(), N - m);
  for (int n = 0; n <= N - m; ++n) {
    for (int j = 0; j <= m; ++j) out.state(n) += c[j] * u.state(n + j);
  }
  return out;
}

double mittag_leffler(double a, double b, double z) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("mittag_leffler: parameters must be positive");
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: argument must be finite");
  // Negative arguments sum an alternating series whose largest term can
  // exceed the result by many orders; the sum is refused once that ratio
  // would cost more than about four digits.
  if (z < -50.0) throw DomainError("mittag_leffler: argument below -50 is not supported");
  if (z == 0.0) return 1.0 / std::tgamma(b);

  constexpr int kMaxTerms = 10000;
  constexpr double kMaxCancellation = 1e4;
  const double log_abs_z = std::log(std::fabs(z));
  double sum = 0.0;
  double max_log_term = -std::numeric_limits<double>::infinity();
  double prev_log_term = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kMaxTerms; ++k) {
    const double arg = a * k + b;
    const double log_term = k * log_abs_z - std::lgamma(arg);
    const double sign = (z < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
    // 1/Gamma is positive for positive arguments, so the sign is that of z^k.
    const double term = sign * std::exp(log_term);
    sum += term;
    max_log_term = std::max(max_log_term, log_term);
    if (!std::isfinite(sum)) throw ConvergenceError("mittag_leffler: overflow while summing the series");
    const bool decreasing = log_term < prev_log_term;
    if (decreasing && std::fabs(term) < 1e-17 * (1.0 + std::fabs(sum))) {
      if (max_log_term - std::log(std::fabs(sum)) > std::log(kMaxCancellation)) {
        throw ConvergenceError("mittag_leffler: alternating series loses too many digits at this argument");
      }
      return sum;
    }
    prev_log_term = log_term;
  }
  throw ConvergenceError("mittag_leffler: series did not converge within 10^4 terms");
}

}  // namespace dfrac
