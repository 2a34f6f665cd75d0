#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfrac/kernels.hpp"
#include "dfrac/linop.hpp"

namespace dfrac {

enum class ResolventMethod { recurrence, series, beta, subordination };

const char* to_string(ResolventMethod m);
ResolventMethod parse_method(const std::string& name);

/// Triangular table beta_{alpha,n}(j), 1 <= j <= n <= N.
class BetaTable {
 public:
  BetaTable(double alpha, int N);

  double alpha() const { return alpha_; }
  int horizon() const { return static_cast<int>(rows_.size()); }
  /// beta_{alpha,n}(j) for 1 <= j <= n.
  double operator()(int n, int j) const { return rows_[n - 1][j - 1]; }
  const std::vector<double>& row(int n) const { return rows_[n - 1]; }

 private:
  double alpha_;
  std::vector<std::vector<double>> rows_;
};

/// Discrete alpha-resolvent family S(0..N) generated by a matrix operator.
class ResolventFamily {
 public:
  ResolventFamily(FracOrder alpha, std::shared_ptr<const LinOperator> op,
                  std::vector<Eigen::MatrixXd> table, ResolventMethod method);

  const FracOrder& alpha() const { return alpha_; }
  const LinOperator& op() const { return *op_; }
  std::shared_ptr<const LinOperator> op_ptr() const { return op_; }
  int horizon() const { return static_cast<int>(table_.size()) - 1; }
  Eigen::Index dim() const { return op_->dim(); }
  ResolventMethod method() const { return method_; }

  /// S(n) for 0 <= n <= N; S(-1) is the zero matrix.
  Eigen::MatrixXd at(int n) const;
  const Eigen::MatrixXd& operator[](int n) const { return table_[static_cast<std::size_t>(n)]; }
  const std::vector<Eigen::MatrixXd>& table() const { return table_; }

  /// max_n ||S(n)||_2.
  double sup_norm() const { return sup_norm_; }

  /// Largest n whose value is not flagged for cancellation (beta and series
  /// methods; equals horizon() otherwise).
  int trusted_upto() const { return trusted_upto_; }
  /// Per-n ratio of the absolute term sum to ||S(n)||: sum_j |beta(j)| ||R||^{j+1}
  /// for beta, sum_j k^{alpha(j+1)}(n) ||A||^j for series and subordination;
  /// empty otherwise.
  const std::vector<double>& cancellation_ratio() const { return cancellation_ratio_; }

 private:
  friend ResolventFamily build_beta(std::shared_ptr<const LinOperator>, double, int);
  friend ResolventFamily build_series(std::shared_ptr<const LinOperator>, double, int, double);
  friend ResolventFamily subordinate_family(std::shared_ptr<const LinOperator>, double, int);
  void flag_cancellation(std::vector<double> ratio);

  FracOrder alpha_;
  std::shared_ptr<const LinOperator> op_;
  std::vector<Eigen::MatrixXd> table_;
  ResolventMethod method_;
  double sup_norm_ = 0.0;
  int trusted_upto_ = 0;
  std::vector<double> cancellation_ratio_;
};

BetaTable beta_coefficients(double alpha, int N);

/// S(0) = (I - A)^{-1}; S(n) = (I - A)^{-1} [k(n) I + A sum_{j<n} k(n - j) S(j)].
ResolventFamily build_recurrence(std::shared_ptr<const LinOperator> op, double alpha, int N);

/// S(n) = sum_j k^{alpha(j+1)}(n) A^j, requires ||A|| < 1. Spectra off the
/// positive axis make the terms cancel; affected n are flagged as for beta.
ResolventFamily build_series(std::shared_ptr<const LinOperator> op, double alpha, int N,
                             double tol = 1e-16);

/// S(n) = sum_{j=1}^{n} beta_{alpha,n}(j) (I - A)^{-(j+1)}.
ResolventFamily build_beta(std::shared_ptr<const LinOperator> op, double alpha, int N);

/// Method dispatch; `auto` picks series when ||A|| < 0.9, recurrence otherwise.
ResolventFamily build_family(std::shared_ptr<const LinOperator> op, double alpha, int N,
                             const std::string& method);

/// Cancellation ratio above which the beta, series and subordination
/// builders mark entries untrusted.
inline constexpr double kBetaCancellationLimit = 1e12;

struct ZTransformSample {
  double lambda = 0.0;
  double deviation = 0.0;
  // Estimated relative size of the omitted terms n > N.
  double tail = 0.0;
  bool conclusive = false;
};

struct ZTransformReport {
  std::vector<ZTransformSample> samples;
  double max_deviation = 0.0;  // over conclusive samples
  bool any_inconclusive = false;
};

/// Compares ((lambda-1)/lambda)^alpha - A)^{-1} x with sum_{n<=N} lambda^{-n} S(n) x
/// on random probe vectors. The omitted tail is estimated geometrically from
/// the growth ratio q of ||S(n)|| over the last steps:
/// ||S(N)|| lambda^{-N} (q/lambda)/(1 - q/lambda), relative to ||lhs||/||x||.
/// A sample is conclusive when q < lambda and that estimate is below tail_limit.
ZTransformReport verify_ztransform(const ResolventFamily& family, const std::vector<double>& lambdas,
                                   unsigned long long seed = 20240101ULL, int probes = 3,
                                   double tail_limit = 1e-11);

/// max_n ||S(n) - k(n) I - A (k * S)(n)|| / max(1, ||S(n)||).
double functional_equation_residual(const ResolventFamily& family);

/// max_{n<=N-2} ||Delta^alpha S(n) - A S(n+2)|| / max(1, ||S(n+2)||), with the
/// fractional difference taken column by column.
double difference_equation_residual(const ResolventFamily& family);

/// max_n ||A S(n) - S(n) A|| / (||A|| ||S(n)||).
double commutation_residual(const ResolventFamily& family);

/// max_n ||S_a(n) - S_b(n)|| / ||S_a(n)|| over 0 <= n <= upto.
double max_relative_gap(const ResolventFamily& a, const ResolventFamily& b, int upto);

}  // namespace dfrac
