#include "dfrac/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dfrac/errors.hpp"
#include "dfrac/fracdiff.hpp"
#include "dfrac/quadrature.hpp"

namespace dfrac {

TimeFunction TimeFunction::scalar(std::function<double(double)> f, double bound_m, double bound_omega,
                                  double endpoint_exponent, std::string label) {
  TimeFunction tf;
  tf.eval = [f = std::move(f)](double t) {
    Eigen::MatrixXd v(1, 1);
    v(0, 0) = f(t);
    return v;
  };
  tf.bound_m = bound_m;
  tf.bound_omega = bound_omega;
  tf.endpoint_exponent = endpoint_exponent;
  tf.label = std::move(label);
  return tf;
}

TimeFunction exp_function(double lambda) {
  return TimeFunction::scalar([lambda](double t) { return std::exp(-lambda * t); }, 1.0, -lambda, 1.0,
                              "exp:" + std::to_string(lambda));
}

TimeFunction decay_function(double m, double omega) {
  return TimeFunction::scalar([m, omega](double t) { return m * std::exp(-omega * t); }, std::fabs(m),
                              -omega, 1.0, "decay");
}

TimeFunction galpha_function(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("g_alpha: order must be positive");
  const double log_gamma = std::lgamma(alpha);
  const double a = alpha - 1.0;
  constexpr double omega = 0.25;
  // sup_{t>=1} t^a e^{-omega t}, attained at t = max(1, a/omega).
  const double t_star = std::max(1.0, a / omega);
  const double m = std::exp(a * std::log(t_star) - omega * t_star - log_gamma) * (1.0 + 1e-12);
  return TimeFunction::scalar(
      [a, log_gamma](double t) { return t > 0.0 ? std::exp(a * std::log(t) - log_gamma) : 0.0; }, m, omega,
      alpha, "galpha:" + std::to_string(alpha));
}

TimeFunction ml_function(double alpha, double beta, double lambda) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("s_{alpha,beta}: parameters must be positive");
  if (lambda < 0.0 || !(lambda < 1.0)) throw DomainError("s_{alpha,beta}: lambda must lie in [0, 1)");
  auto f = [alpha, beta, lambda](double t) {
    if (t <= 0.0) return 0.0;
    return std::pow(t, beta - 1.0) * mittag_leffler(alpha, beta, lambda * std::pow(t, alpha));
  };
  const double omega = lambda > 0.0 ? std::pow(lambda, 1.0 / alpha) + 0.05 : 0.05;
  if (!(omega < 1.0)) throw InadmissibleGrowthError("s_{alpha,beta}: growth rate reaches 1");
  double m = 0.0;
  for (double t = 1.0; t <= 400.0; t *= 1.25) m = std::max(m, std::fabs(f(t)) * std::exp(-omega * t));
  std::ostringstream label;
  label << "ml:" << alpha << "," << beta << "," << lambda;
  return TimeFunction::scalar(f, 2.0 * m, omega, beta, label.str());
}

TimeFunction poisson_density_function(int m) {
  return TimeFunction::scalar([m](double t) { return poisson_weight(m, t); }, 1.0, 0.0, 1.0,
                              "poisson:" + std::to_string(m));
}

TimeFunction parse_time_function(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos) throw ConfigError("function descriptor needs the form kind:params");
  const std::string kind = descriptor.substr(0, colon);
  std::vector<double> params;
  std::stringstream ss(descriptor.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      params.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("function descriptor: cannot parse number '" + item + "'");
    }
  }
  const auto need = [&](std::size_t count) {
    if (params.size() != count) {
      throw ConfigError("function descriptor '" + kind + "' expects " + std::to_string(count) + " parameter(s)");
    }
  };
  if (kind == "exp") {
    need(1);
    return exp_function(params[0]);
  }
  if (kind == "galpha") {
    need(1);
    return galpha_function(params[0]);
  }
  if (kind == "ml") {
    need(3);
    return ml_function(params[0], params[1], params[2]);
  }
  throw ConfigError("unknown function kind '" + kind + "' (expected exp, galpha or ml)");
}

double poisson_weight(int n, double t) {
  if (n < 0) throw UsageError("poisson_weight: index must be >= 0");
  if (t < 0.0 || std::isnan(t)) throw DomainError("poisson_weight: t must be >= 0");
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-t + n * std::log(t) - std::lgamma(n + 1.0));
}

double poisson_truncation(int n, double omega) {
  const double base = n + 40.0 + 10.0 * std::sqrt(n + 1.0);
  const double rate = 1.0 - std::max(0.0, omega);
  return base / rate;
}

namespace {

// Adds the 16-point rule on [a, b] of p_n(t) psi(t) into acc.
void integrate_panel(const TimeFunction& psi, int n, double a, double b, Eigen::MatrixXd& acc) {
  const GaussRule& rule = gauss_legendre16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double log_norm = std::lgamma(n + 1.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = mid + half * rule.nodes[i];
    const double w = half * rule.weights[i] * std::exp(-t + n * std::log(t) - log_norm);
    if (w == 0.0) continue;
    acc += w * psi.eval(t);
  }
}

void check_growth(const TimeFunction& psi, double horizon) {
  for (double t = 1.0; t <= horizon; t *= 2.0) {
    const double value = psi.eval(t).norm();
    const double bound = psi.bound_m * std::exp(psi.bound_omega * t);
    if (!std::isfinite(value) || value > bound * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "declared growth bound violated at t = " << t << " (|psi| = " << value << ", bound = " << bound << ")";
      throw InadmissibleGrowthError(os.str());
    }
  }
}

}  // namespace

Eigen::MatrixXd poisson_transform(const TimeFunction& psi, int n, const QuadratureSpec& q) {
  if (n < 0) throw UsageError("poisson_transform: index must be >= 0");
  if (q.panels_per_unit < 1) throw UsageError("poisson_transform: panels_per_unit must be >= 1");
  if (!(psi.bound_omega < 1.0)) {
    throw InadmissibleGrowthError("poisson_transform: declared growth rate must be < 1");
  }
  if (!(psi.endpoint_exponent > 0.0)) throw DomainError("poisson_transform: endpoint exponent must be > 0");

  const double truncation = poisson_truncation(n, psi.bound_omega);
  check_growth(psi, truncation);

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(psi.rows, psi.cols);

  // [0, 1]: geometric panels [r^{l+1}, r^l]; the skipped core [0, r^L] carries
  // mass of order r^{L (n + gamma)}.
  constexpr double ratio = 0.2;
  const double decay = n + psi.endpoint_exponent;
  const int levels = std::clamp(static_cast<int>(std::ceil(17.0 * std::log(10.0) / (decay * std::log(1.0 / ratio)))), 1, 400);
  double upper = 1.0;
  for (int l = 0; l < levels; ++l) {
    const double lower = upper * ratio;
    integrate_panel(psi, n, lower, upper, acc);
    upper = lower;
  }

  // [1, T] uniform, then extended while the panel contribution is visible.
  const double width = 1.0 / q.panels_per_unit;
  double t = 1.0;
  while (t < truncation) {
    integrate_panel(psi, n, t, t + width, acc);
    t += width;
  }
  const double hard_stop = 10.0 * truncation;
  while (t < hard_stop) {
    Eigen::MatrixXd panel = Eigen::MatrixXd::Zero(psi.rows, psi.cols);
    integrate_panel(psi, n, t, t + width, panel);
    acc += panel;
    t += width;
    if (panel.norm() <= q.tail_tol * std::max(1e-300, acc.norm())) break;
  }
  if (!acc.allFinite()) throw ConvergenceError("poisson_transform: non-finite integral");
  return acc;
}

double poisson_transform_scalar(const TimeFunction& psi, int n, const QuadratureSpec& q) {
  if (psi.rows != 1 || psi.cols != 1) throw UsageError("poisson_transform_scalar: function is not scalar");
  return poisson_transform(psi, n, q)(0, 0);
}

double poisson_ml_closed(double alpha, double beta, double lambda, int n) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("poisson_ml_closed: alpha, beta must be positive");
  if (!(std::fabs(lambda) < 1.0)) throw DomainError("poisson_ml_closed: need |lambda| < 1");
  if (n < 0) throw UsageError("poisson_ml_closed: index must be >= 0");
  const double log_nfact = std::lgamma(n + 1.0);
  if (lambda == 0.0) return std::exp(std::lgamma(n + beta) - log_nfact - std::lgamma(beta));

  const double log_abs_lambda = std::log(std::fabs(lambda));
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    const double arg = alpha * k + beta;
    const double log_term = k * log_abs_lambda + std::lgamma(n + arg) - log_nfact - std::lgamma(arg);
    const double term = ((lambda < 0.0 && k % 2 == 1) ? -1.0 : 1.0) * std::exp(log_term);
    sum += term;
    if (log_term < prev && std::fabs(term) < 1e-16 * std::fabs(sum)) return sum;
    prev = log_term;
  }
  throw ConvergenceError("poisson_ml_closed: series did not converge within 10^4 terms");
}

ResolventFamily subordinate_family(std::shared_ptr<const LinOperator> op, double alpha, int N) {
  if (N < 0) throw UsageError("subordinate_family: horizon must be >= 0");
  const FracOrder order(alpha);
  const double norm = op->norm_estimate();
  if (!(norm < 1.0)) throw MethodInapplicableError("subordination needs ||A|| < 1");

  const Eigen::Index d = op->dim();
  std::vector<Eigen::MatrixXd> table(static_cast<std::size_t>(N) + 1, Eigen::MatrixXd::Zero(d, d));
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
  std::vector<double> magnitude(static_cast<std::size_t>(N) + 1, 0.0);
  std::vector<double> log_nfact(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) log_nfact[n] = std::lgamma(n + 1.0);

  for (int k = 0; k <= 2000; ++k) {
    // Gamma(alpha (k+1) + n) / (Gamma(alpha (k+1)) n!): Poisson moments of the
    // k-th Mittag-Leffler term.
    const double arg = alpha * (k + 1);
    const double log_base = std::lgamma(arg);
    const double log_scale = norm > 0.0 ? k * std::log(norm) : (k == 0 ? 0.0 : -INFINITY);
    bool negligible = true;
    for (int n = 0; n <= N; ++n) {
      const double coeff = std::exp(std::lgamma(arg + n) - log_base - log_nfact[n]);
      table[n] += coeff * power;
      const double term = std::exp(std::log(coeff) + log_scale);
      magnitude[n] += term;
      if (!(term <= 1e-16 * table[n].norm() / std::sqrt(static_cast<double>(d)))) negligible = false;
    }
    if ((negligible && k > 0) || norm == 0.0) {
      ResolventFamily family(order, std::move(op), std::move(table), ResolventMethod::subordination);
      for (int n = 0; n <= N; ++n) {
        const double s = spectral_norm(family[n]);
        magnitude[n] = s > 0.0 ? magnitude[n] / s : std::numeric_limits<double>::infinity();
      }
      family.flag_cancellation(std::move(magnitude));
      return family;
    }
    power = op->apply_columns(power);
  }
  throw ConvergenceError("subordinate_family: no convergence within 2000 terms");
}

SamplingReport verify_sampling_identity(double beta, const FracOrder& alpha, int N, const QuadratureSpec& q) {
  if (!(beta > alpha.alpha())) throw DomainError("verify_sampling_identity: need beta > alpha");
  if (N < 2) throw UsageError("verify_sampling_identity: horizon must be >= 2");
  const double rest = beta - alpha.alpha();

  SamplingReport report;
  const ScalarSeq lhs_kernel = cesaro_kernel(rest, N);
  const ScalarSeq rhs_kernel = rl_diff(alpha, cesaro_kernel(beta, N));
  for (int n = 0; n <= N - 2; ++n) {
    const double l = lhs_kernel[n + 2];
    report.kernel_route = std::max(report.kernel_route, std::fabs(l - rhs_kernel[n]) / std::fabs(l));
  }

  const TimeFunction g_beta = galpha_function(beta);
  const TimeFunction g_rest = galpha_function(rest);
  ScalarSeq transformed(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) transformed[n] = poisson_transform_scalar(g_beta, n, q);
  const ScalarSeq rhs_quad = rl_diff(alpha, transformed);
  for (int n = 0; n <= N - 2; ++n) {
    const double l = poisson_transform_scalar(g_rest, n + 2, q);
    report.quadrature_route = std::max(report.quadrature_route, std::fabs(l - rhs_quad[n]) / std::fabs(l));
  }
  return report;
}

}  // namespace dfrac
