#include "dfrac/linop.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "dfrac/errors.hpp"

namespace dfrac {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(Eigen::Index expected, Eigen::Index got, const char* who) {
  if (expected != got) {
    std::ostringstream os;
    os << who << ": dimension mismatch (operator " << expected << ", vector " << got << ")";
    throw UsageError(os.str());
  }
}

[[noreturn]] void singular(double lambda, const char* detail) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda = " << lambda << " is not in the resolvent set: " << detail;
  throw ResolventSetError(os.str());
}

}  // namespace

LinOperator LinOperator::dense(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw UsageError("dense operator must be a nonempty square matrix");
  }
  if (!matrix.allFinite()) throw DomainError("dense operator has non-finite entries");
  const auto d = matrix.rows();
  return LinOperator(DenseRepr{std::move(matrix)}, d);
}

LinOperator LinOperator::diagonal(Eigen::VectorXd multipliers, std::vector<double> grid) {
  if (multipliers.size() == 0) throw UsageError("diagonal operator needs at least one multiplier");
  if (!multipliers.allFinite()) throw DomainError("diagonal operator has non-finite multipliers");
  if (!grid.empty() && static_cast<Eigen::Index>(grid.size()) != multipliers.size()) {
    throw UsageError("diagonal operator: grid length differs from multiplier count");
  }
  const auto d = multipliers.size();
  return LinOperator(DiagonalRepr{std::move(multipliers), std::move(grid)}, d);
}

LinOperator LinOperator::laplacian1d(double a, double b, int points) {
  if (points < 1) throw UsageError("laplacian1d: need at least one interior point");
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("laplacian1d: interval must satisfy a < b");
  }
  return LinOperator(Laplacian1DRepr{a, b, points}, points);
}

LinOperator LinOperator::zero(Eigen::Index dim) { return dense(Eigen::MatrixXd::Zero(dim, dim)); }

const char* LinOperator::type_name() const {
  return std::visit(Overloaded{[](const DenseRepr&) { return "dense"; },
                               [](const DiagonalRepr&) { return "diagonal"; },
                               [](const Laplacian1DRepr&) { return "laplacian1d"; }},
                    repr_);
}

Eigen::VectorXd LinOperator::apply(const Eigen::VectorXd& x) const {
  check_dim(dim_, x.size(), "apply");
  return apply_columns(x);
}

Eigen::MatrixXd LinOperator::apply_columns(const Eigen::MatrixXd& x) const {
  check_dim(dim_, x.rows(), "apply");
  return std::visit(
      Overloaded{
          [&](const DenseRepr& r) -> Eigen::MatrixXd { return r.matrix * x; },
          [&](const DiagonalRepr& r) -> Eigen::MatrixXd { return r.multipliers.asDiagonal() * x; },
          [&](const Laplacian1DRepr& r) -> Eigen::MatrixXd {
            const double c = 1.0 / (r.spacing() * r.spacing());
            const Eigen::Index d = dim_;
            Eigen::MatrixXd y = -2.0 * c * x;
            if (d > 1) {
              y.topRows(d - 1) += c * x.bottomRows(d - 1);
              y.bottomRows(d - 1) += c * x.topRows(d - 1);
            }
            return y;
          }},
      repr_);
}

Eigen::VectorXd LinOperator::resolve(double lambda, const Eigen::VectorXd& y) const {
  check_dim(dim_, y.size(), "resolve");
  return factor(lambda).solve(y);
}

ResolventSolver LinOperator::factor(double lambda) const {
  if (!std::isfinite(lambda)) throw DomainError("resolve: lambda must be finite");
  return std::visit(
      Overloaded{
          [&](const DenseRepr& r) -> ResolventSolver {
            Eigen::MatrixXd shifted = -r.matrix;
            shifted.diagonal().array() += lambda;
            const double scale = shifted.cwiseAbs().maxCoeff();
            if (scale == 0.0) singular(lambda, "lambda I - A is the zero matrix");
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
            const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
            if (!(min_pivot >= kPivotTolerance * scale)) singular(lambda, "LU pivot below tolerance");
            return ResolventSolver(std::move(lu), dim_, lambda);
          },
          [&](const DiagonalRepr& r) -> ResolventSolver {
            const double scale = std::max(std::fabs(lambda), r.multipliers.cwiseAbs().maxCoeff());
            Eigen::VectorXd gap = (lambda - r.multipliers.array()).matrix();
            if (scale == 0.0 || !(gap.cwiseAbs().minCoeff() >= kPivotTolerance * scale)) {
              singular(lambda, "coincides with a multiplier");
            }
            return ResolventSolver(Eigen::VectorXd(gap.cwiseInverse()), dim_, lambda);
          },
          [&](const Laplacian1DRepr& r) -> ResolventSolver {
            // lambda I - A = tridiag(-c, lambda + 2c, -c); Thomas elimination.
            const double c = 1.0 / (r.spacing() * r.spacing());
            const double diag = lambda + 2.0 * c;
            const double off = -c;
            const double scale = std::fabs(lambda) + 4.0 * c;
            ResolventSolver::Tridiagonal t;
            t.off = off;
            const auto d = static_cast<std::size_t>(dim_);
            t.pivots.resize(d);
            t.upper.resize(d);
            double prev_upper = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
              const double p = diag - (i == 0 ? 0.0 : off * prev_upper);
              if (!(std::fabs(p) >= kPivotTolerance * scale)) singular(lambda, "tridiagonal pivot below tolerance");
              t.pivots[i] = p;
              t.upper[i] = off / p;
              prev_upper = t.upper[i];
            }
            return ResolventSolver(std::move(t), dim_, lambda);
          }},
      repr_);
}

Eigen::VectorXd ResolventSolver::solve(const Eigen::VectorXd& y) const {
  check_dim(dim_, y.size(), "resolve");
  return solve_columns(y);
}

Eigen::MatrixXd ResolventSolver::solve_columns(const Eigen::MatrixXd& y) const {
  check_dim(dim_, y.rows(), "resolve");
  return std::visit(
      Overloaded{
          [&](const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) -> Eigen::MatrixXd { return lu.solve(y); },
          [&](const Eigen::VectorXd& inv) -> Eigen::MatrixXd { return inv.asDiagonal() * y; },
          [&](const Tridiagonal& t) -> Eigen::MatrixXd {
            const Eigen::Index d = dim_;
            Eigen::MatrixXd x(y.rows(), y.cols());
            x.row(0) = y.row(0) / t.pivots[0];
            for (Eigen::Index i = 1; i < d; ++i) {
              x.row(i) = (y.row(i) - t.off * x.row(i - 1)) / t.pivots[static_cast<std::size_t>(i)];
            }
            for (Eigen::Index i = d - 2; i >= 0; --i) {
              x.row(i) -= t.upper[static_cast<std::size_t>(i)] * x.row(i + 1);
            }
            return x;
          }},
      factor_);
}

std::vector<double> laplacian_eigenvalues(const Laplacian1DRepr& lap) {
  const double dx = lap.spacing();
  const int d = lap.points;
  std::vector<double> ev(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    const double s = std::sin(k * std::numbers::pi / (2.0 * (d + 1)));
    ev[static_cast<std::size_t>(d - k)] = -4.0 / (dx * dx) * s * s;
  }
  return ev;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double LinOperator::norm_estimate() const {
  return std::visit(
      Overloaded{
          [](const DenseRepr& r) {
            // Power iteration on A^T A from a fixed, generic start vector.
            const Eigen::Index d = r.matrix.rows();
            Eigen::VectorXd v(d);
            for (Eigen::Index i = 0; i < d; ++i) v(i) = 1.0 + 0.37 * std::sin(1.0 + 2.3 * static_cast<double>(i));
            v.normalize();
            double estimate = 0.0;
            for (int it = 0; it < 50; ++it) {
              Eigen::VectorXd w = r.matrix.transpose() * (r.matrix * v);
              const double wn = w.norm();
              if (wn == 0.0) return 0.0;
              const double next = std::sqrt(wn);
              v = w / wn;
              const bool done = std::fabs(next - estimate) <= 1e-6 * next;
              estimate = next;
              if (done) break;
            }
            // Rayleigh quotient of the final iterate is a lower bound that
            // converges twice as fast as the power ratio.
            return std::max(estimate, (r.matrix * v).norm());
          },
          [](const DiagonalRepr& r) { return r.multipliers.cwiseAbs().maxCoeff(); },
          [](const Laplacian1DRepr& r) { return std::fabs(laplacian_eigenvalues(r).front()); }},
      repr_);
}

bool LinOperator::entrywise_nonneg() const {
  return std::visit(Overloaded{[](const DenseRepr& r) { return (r.matrix.array() >= 0.0).all(); },
                               [](const DiagonalRepr& r) { return (r.multipliers.array() >= 0.0).all(); },
                               [](const Laplacian1DRepr&) { return false; }},
                    repr_);
}

Eigen::MatrixXd LinOperator::materialize() const {
  return std::visit(
      Overloaded{[](const DenseRepr& r) -> Eigen::MatrixXd { return r.matrix; },
                 [](const DiagonalRepr& r) -> Eigen::MatrixXd { return r.multipliers.asDiagonal(); },
                 [&](const Laplacian1DRepr&) -> Eigen::MatrixXd {
                   return apply_columns(Eigen::MatrixXd::Identity(dim_, dim_));
                 }},
      repr_);
}

}  // namespace dfrac
