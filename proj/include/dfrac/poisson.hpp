#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "dfrac/kernels.hpp"
#include "dfrac/linop.hpp"
#include "dfrac/resolvent.hpp"

namespace dfrac {

/// Controls the composite Gauss-Legendre realization of the Poisson integral.
struct QuadratureSpec {
  int panels_per_unit = 1;
  double tail_tol = 1e-14;
};

/// A function of t > 0 with values in R^{rows x cols} and declared growth
/// ||psi(t)|| <= M e^{omega t}. `endpoint_exponent` gamma declares an
/// integrable singularity psi(t) ~ t^{gamma - 1} at the origin (1 = regular).
struct TimeFunction {
  std::function<Eigen::MatrixXd(double)> eval;
  Eigen::Index rows = 1;
  Eigen::Index cols = 1;
  double bound_m = 1.0;
  double bound_omega = 0.0;
  double endpoint_exponent = 1.0;
  std::string label;

  static TimeFunction scalar(std::function<double(double)> f, double bound_m, double bound_omega,
                             double endpoint_exponent = 1.0, std::string label = {});
};

/// e_lambda(t) = e^{-lambda t}.
TimeFunction exp_function(double lambda);
/// M e^{-omega t}.
TimeFunction decay_function(double m, double omega);
/// g_alpha(t) = t^{alpha - 1} / Gamma(alpha).
TimeFunction galpha_function(double alpha);
/// s_{alpha,beta}(t) = t^{beta - 1} E_{alpha,beta}(lambda t^alpha), lambda >= 0.
TimeFunction ml_function(double alpha, double beta, double lambda);
/// p_m(t), the Poisson density itself.
TimeFunction poisson_density_function(int m);
/// Parses "exp:<lambda>", "galpha:<alpha>" or "ml:<alpha>,<beta>,<lambda>".
TimeFunction parse_time_function(const std::string& descriptor);

/// p_n(t) = e^{-t} t^n / n!, evaluated in the log domain.
double poisson_weight(int n, double t);

/// Truncation point of the Poisson integral for index n and growth omega.
double poisson_truncation(int n, double omega);

/// (P psi)(n) = integral_0^inf p_n(t) psi(t) dt by composite 16-point
/// Gauss-Legendre with geometric grading toward t = 0.
Eigen::MatrixXd poisson_transform(const TimeFunction& psi, int n, const QuadratureSpec& q = {});
double poisson_transform_scalar(const TimeFunction& psi, int n, const QuadratureSpec& q = {});

/// sum_k lambda^k Gamma(n + alpha k + beta) / (n! Gamma(alpha k + beta)), |lambda| < 1.
double poisson_ml_closed(double alpha, double beta, double lambda, int n);

/// Discrete family as the Poisson transform of t^{alpha-1} E_{alpha,alpha}(A t^alpha),
/// summed term by term; requires ||A|| < 1.
ResolventFamily subordinate_family(std::shared_ptr<const LinOperator> op, double alpha, int N);

struct SamplingReport {
  double kernel_route = 0.0;      // |k^{beta-alpha}(n+2) - Delta^alpha k^beta(n)| rel.
  double quadrature_route = 0.0;  // same identity with both sides by quadrature
};

/// Checks P(D^alpha g_beta)(n + 2) = Delta^alpha P(g_beta)(n) for n <= N - 2.
SamplingReport verify_sampling_identity(double beta, const FracOrder& alpha, int N,
                                        const QuadratureSpec& q = {});

}  // namespace dfrac
