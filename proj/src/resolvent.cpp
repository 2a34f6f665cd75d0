#include "dfrac/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>

#include "dfrac/errors.hpp"
#include "dfrac/fracdiff.hpp"

namespace dfrac {

const char* to_string(ResolventMethod m) {
  switch (m) {
    case ResolventMethod::recurrence: return "recurrence";
    case ResolventMethod::series: return "series";
    case ResolventMethod::beta: return "beta";
    case ResolventMethod::subordination: return "subordination";
  }
  return "unknown";
}

ResolventMethod parse_method(const std::string& name) {
  if (name == "recurrence") return ResolventMethod::recurrence;
  if (name == "series") return ResolventMethod::series;
  if (name == "beta") return ResolventMethod::beta;
  if (name == "subordination") return ResolventMethod::subordination;
  throw UsageError("unknown resolvent method '" + name + "'");
}

BetaTable::BetaTable(double alpha, int N) : alpha_(alpha) {
  if (N < 1) throw UsageError("beta_coefficients: horizon must be >= 1");
  const ScalarSeq k = cesaro_kernel(alpha, N);
  rows_.resize(static_cast<std::size_t>(N));
  rows_[0] = {k[1]};
  for (int n = 2; n <= N; ++n) {
    auto& row = rows_[n - 1];
    row.assign(static_cast<std::size_t>(n), 0.0);
    const auto b = [&](int i, int j) { return rows_[i - 1][j - 1]; };

    double first = k[n];
    for (int j = 1; j <= n - 1; ++j) first -= k[n - j] * b(j, 1);
    row[0] = first;

    for (int l = 2; l <= n - 1; ++l) {
      double acc = 0.0;
      for (int j = l - 1; j <= n - 1; ++j) acc += k[n - j] * b(j, l - 1);
      for (int j = l; j <= n - 1; ++j) acc -= k[n - j] * b(j, l);
      row[l - 1] = acc;
    }

    row[n - 1] = k[1] * b(n - 1, n - 1);
  }
}

BetaTable beta_coefficients(double alpha, int N) { return BetaTable(alpha, N); }

ResolventFamily::ResolventFamily(FracOrder alpha, std::shared_ptr<const LinOperator> op,
                                 std::vector<Eigen::MatrixXd> table, ResolventMethod method)
    : alpha_(alpha), op_(std::move(op)), table_(std::move(table)), method_(method) {
  if (!op_) throw UsageError("resolvent family needs an operator");
  if (table_.empty()) throw UsageError("resolvent family needs at least S(0)");
  for (const auto& s : table_) {
    if (s.rows() != op_->dim() || s.cols() != op_->dim()) {
      throw UsageError("resolvent family: matrix size differs from operator dimension");
    }
    if (!s.allFinite()) throw ConvergenceError("resolvent family: non-finite entries");
    sup_norm_ = std::max(sup_norm_, spectral_norm(s));
  }
  trusted_upto_ = horizon();
}

void ResolventFamily::flag_cancellation(std::vector<double> ratio) {
  cancellation_ratio_ = std::move(ratio);
  trusted_upto_ = horizon();
  for (int n = 0; n <= horizon(); ++n) {
    if (cancellation_ratio_[static_cast<std::size_t>(n)] > kBetaCancellationLimit) {
      trusted_upto_ = n - 1;
      break;
    }
  }
}

Eigen::MatrixXd ResolventFamily::at(int n) const {
  if (n < 0) return Eigen::MatrixXd::Zero(dim(), dim());
  if (n > horizon()) throw UsageError("resolvent family: index beyond horizon");
  return table_[static_cast<std::size_t>(n)];
}

namespace {

void require_horizon(int N) {
  if (N < 0) throw UsageError("resolvent family: horizon must be >= 0");
}

// Cheap lower bound on ||M||_2 used only in stopping tests.
double norm_lower(const Eigen::MatrixXd& m) {
  return m.norm() / std::sqrt(static_cast<double>(std::max<Eigen::Index>(1, m.rows())));
}

// The Dirichlet Laplacian is diagonalized by the sine modes, so its family is
// assembled from one scalar recurrence per eigenvalue. S(n) then commutes with
// A to roundoff even when ||S(n)|| has decayed far below the terms that the
// matrix recurrence cancels.
std::vector<Eigen::MatrixXd> laplacian_recurrence(const Laplacian1DRepr& lap, const ScalarSeq& k) {
  const int d = lap.points;
  const int N = horizon(k);
  const double dx = lap.spacing();
  Eigen::MatrixXd modes(d, d);
  for (int i = 0; i < d; ++i) {
    for (int m = 0; m < d; ++m) modes(i, m) = std::sqrt(2.0 / (d + 1)) * std::sin((i + 1) * (m + 1) * std::numbers::pi / (d + 1));
  }
  Eigen::VectorXd lambda(d);
  for (int m = 0; m < d; ++m) {
    const double s = std::sin((m + 1) * std::numbers::pi / (2.0 * (d + 1)));
    lambda(m) = -4.0 / (dx * dx) * s * s;
  }
  std::vector<Eigen::VectorXd> values;
  values.reserve(static_cast<std::size_t>(N) + 1);
  std::vector<Eigen::MatrixXd> table;
  table.reserve(static_cast<std::size_t>(N) + 1);
  const Eigen::ArrayXd denom = 1.0 - lambda.array();
  for (int n = 0; n <= N; ++n) {
    Eigen::ArrayXd history = Eigen::ArrayXd::Zero(d);
    for (int j = 0; j < n; ++j) history += k[n - j] * values[j].array();
    values.emplace_back((k[n] + lambda.array() * history) / denom);
    table.push_back(modes * values.back().asDiagonal() * modes.transpose());
  }
  return table;
}

}  // namespace

ResolventFamily build_recurrence(std::shared_ptr<const LinOperator> op, double alpha, int N) {
  require_horizon(N);
  const FracOrder order(alpha);
  const Eigen::Index d = op->dim();
  const ScalarSeq k = cesaro_kernel(alpha, N);
  if (const auto* lap = std::get_if<Laplacian1DRepr>(&op->repr())) {
    return ResolventFamily(order, op, laplacian_recurrence(*lap, k), ResolventMethod::recurrence);
  }
  const ResolventSolver solver = op->factor(1.0);

  std::vector<Eigen::MatrixXd> table;
  table.reserve(static_cast<std::size_t>(N) + 1);
  table.push_back(solver.solve_columns(Eigen::MatrixXd::Identity(d, d)));
  for (int n = 1; n <= N; ++n) {
    Eigen::MatrixXd history = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < n; ++j) history += k[n - j] * table[j];
    Eigen::MatrixXd rhs = op->apply_columns(history);
    rhs.diagonal().array() += k[n];
    table.push_back(solver.solve_columns(rhs));
  }
  return ResolventFamily(order, std::move(op), std::move(table), ResolventMethod::recurrence);
}

ResolventFamily build_series(std::shared_ptr<const LinOperator> op, double alpha, int N, double tol) {
  require_horizon(N);
  const FracOrder order(alpha);
  const double norm = op->norm_estimate();
  if (!(norm < 1.0)) {
    std::ostringstream os;
    os << "series construction needs ||A|| < 1, estimate is " << norm;
    throw MethodInapplicableError(os.str());
  }
  const Eigen::Index d = op->dim();
  std::vector<Eigen::MatrixXd> table(static_cast<std::size_t>(N) + 1, Eigen::MatrixXd::Zero(d, d));
  std::vector<double> magnitude(static_cast<std::size_t>(N) + 1, 0.0);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);

  constexpr int kMaxTerms = 2000;
  double previous_bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= kMaxTerms; ++j) {
    const ScalarSeq c = cesaro_kernel(alpha * (j + 1), N);
    const double scale = std::pow(norm, j);
    for (int n = 0; n <= N; ++n) {
      table[n] += c[n] * power;
      magnitude[n] += c[n] * scale;
    }

    const double bound = std::max(c.front(), c.back()) * scale;
    bool small = bound < previous_bound || norm == 0.0;
    for (int n = 0; n <= N && small; ++n) {
      small = c[n] * scale <= tol * norm_lower(table[n]) || c[n] * scale == 0.0;
    }
    if (small || norm == 0.0) {
      ResolventFamily family(order, std::move(op), std::move(table), ResolventMethod::series);
      for (int n = 0; n <= N; ++n) {
        const double s = spectral_norm(family[n]);
        magnitude[n] = s > 0.0 ? magnitude[n] / s : std::numeric_limits<double>::infinity();
      }
      family.flag_cancellation(std::move(magnitude));
      return family;
    }
    previous_bound = bound;
    power = op->apply_columns(power);
  }
  throw ConvergenceError("series construction: no convergence within 2000 terms");
}

ResolventFamily build_beta(std::shared_ptr<const LinOperator> op, double alpha, int N) {
  require_horizon(N);
  const FracOrder order(alpha);
  const Eigen::Index d = op->dim();
  const ResolventSolver solver = op->factor(1.0);
  const Eigen::MatrixXd resolvent = solver.solve_columns(Eigen::MatrixXd::Identity(d, d));
  const double r_norm = spectral_norm(resolvent);

  // powers[j] = R^{j+1}
  std::vector<Eigen::MatrixXd> powers{resolvent};
  std::vector<Eigen::MatrixXd> table{resolvent};
  std::vector<double> ratio{1.0};
  if (N >= 1) {
    const BetaTable beta(alpha, N);
    for (int n = 1; n <= N; ++n) {
      powers.push_back(solver.solve_columns(powers.back()));
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
      double magnitude = 0.0;
      for (int j = 1; j <= n; ++j) {
        s += beta(n, j) * powers[j];
        magnitude += std::fabs(beta(n, j)) * std::pow(r_norm, j + 1);
      }
      const double s_norm = spectral_norm(s);
      ratio.push_back(s_norm > 0.0 ? magnitude / s_norm : std::numeric_limits<double>::infinity());
      table.push_back(std::move(s));
    }
  }
  ResolventFamily family(order, std::move(op), std::move(table), ResolventMethod::beta);
  family.flag_cancellation(std::move(ratio));
  return family;
}

ResolventFamily build_family(std::shared_ptr<const LinOperator> op, double alpha, int N,
                             const std::string& method) {
  if (method == "auto") {
    return op->norm_estimate() < 0.9 ? build_series(std::move(op), alpha, N)
                                     : build_recurrence(std::move(op), alpha, N);
  }
  switch (parse_method(method)) {
    case ResolventMethod::recurrence: return build_recurrence(std::move(op), alpha, N);
    case ResolventMethod::series: return build_series(std::move(op), alpha, N);
    case ResolventMethod::beta: return build_beta(std::move(op), alpha, N);
    case ResolventMethod::subordination: break;
  }
  throw UsageError("method 'subordination' is provided by the poisson module");
}

ZTransformReport verify_ztransform(const ResolventFamily& family, const std::vector<double>& lambdas,
                                   unsigned long long seed, int probes, double tail_limit) {
  const Eigen::Index d = family.dim();
  const int N = family.horizon();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(d, probes);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);

  // Largest growth ratio over the last few steps.
  double q = 0.0;
  for (int n = std::max(1, N - 5); n <= N; ++n) {
    const double prev = spectral_norm(family[n - 1]);
    const double cur = spectral_norm(family[n]);
    q = std::max(q, prev > 0.0 ? cur / prev : (cur > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
  }
  const double last = spectral_norm(family[N]);

  ZTransformReport report;
  for (double lambda : lambdas) {
    if (!(lambda > 1.0)) throw DomainError("verify_ztransform: samples must exceed 1");
    ZTransformSample sample;
    sample.lambda = lambda;

    const double mu = std::pow((lambda - 1.0) / lambda, family.alpha().alpha());
    const Eigen::MatrixXd lhs = family.op().factor(mu).solve_columns(x);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(d, probes);
    // Horner in 1/lambda from the top index.
    for (int n = N; n >= 0; --n) rhs = rhs / lambda + family[n] * x;
    sample.deviation = (lhs - rhs).norm() / lhs.norm();
    const double scale = lhs.norm() / x.norm();
    const double r = q / lambda;
    sample.tail = r < 1.0 ? last * std::pow(lambda, -N) * (r / (1.0 - r)) / scale
                          : std::numeric_limits<double>::infinity();
    sample.conclusive = sample.tail < tail_limit;

    if (sample.conclusive) {
      report.max_deviation = std::max(report.max_deviation, sample.deviation);
    } else {
      report.any_inconclusive = true;
    }
    report.samples.push_back(sample);
  }
  return report;
}

double functional_equation_residual(const ResolventFamily& family) {
  const int N = family.horizon();
  const Eigen::Index d = family.dim();
  const ScalarSeq k = cesaro_kernel(family.alpha().alpha(), N);
  double worst = 0.0;
  for (int n = 0; n <= N; ++n) {
    Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j <= n; ++j) conv += k[n - j] * family[j];
    Eigen::MatrixXd r = family[n] - family.op().apply_columns(conv);
    r.diagonal().array() -= k[n];
    worst = std::max(worst, spectral_norm(r) / std::max(1.0, spectral_norm(family[n])));
  }
  return worst;
}

double difference_equation_residual(const ResolventFamily& family) {
  const int N = family.horizon();
  if (N < 2) throw UsageError("difference_equation_residual: horizon must be >= 2");
  const Eigen::Index d = family.dim();
  std::vector<Eigen::MatrixXd> lhs(static_cast<std::size_t>(N) - 1, Eigen::MatrixXd(d, d));
  for (Eigen::Index c = 0; c < d; ++c) {
    VecSeq column(d, N);
    for (int n = 0; n <= N; ++n) column.state(n) = family[n].col(c);
    const VecSeq diff = rl_diff(family.alpha(), column);
    for (int n = 0; n <= N - 2; ++n) lhs[n].col(c) = diff.state(n);
  }
  double worst = 0.0;
  for (int n = 0; n <= N - 2; ++n) {
    const Eigen::MatrixXd r = lhs[n] - family.op().apply_columns(family[n + 2]);
    worst = std::max(worst, spectral_norm(r) / std::max(1.0, spectral_norm(family[n + 2])));
  }
  return worst;
}

double commutation_residual(const ResolventFamily& family) {
  const Eigen::MatrixXd a = family.op().materialize();
  const double a_norm = spectral_norm(a);
  if (a_norm == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& s : family.table()) {
    const double s_norm = spectral_norm(s);
    if (s_norm == 0.0) continue;
    worst = std::max(worst, spectral_norm(a * s - s * a) / (a_norm * s_norm));
  }
  return worst;
}

double max_relative_gap(const ResolventFamily& a, const ResolventFamily& b, int upto) {
  if (a.dim() != b.dim()) throw UsageError("max_relative_gap: dimension mismatch");
  upto = std::min({upto, a.horizon(), b.horizon()});
  double worst = 0.0;
  for (int n = 0; n <= upto; ++n) {
    worst = std::max(worst, spectral_norm(a[n] - b[n]) / spectral_norm(a[n]));
  }
  return worst;
}

}  // namespace dfrac
