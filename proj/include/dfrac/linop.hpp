#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace dfrac {

/// Relative pivot threshold below which lambda I - A is declared singular.
inline constexpr double kPivotTolerance = 1e-13;

struct DenseRepr {
  Eigen::MatrixXd matrix;
};

/// Multiplication operator (A x)_i = m_i x_i, optionally tied to grid points.
struct DiagonalRepr {
  Eigen::VectorXd multipliers;
  std::vector<double> grid;
};

/// Second derivative on [a, b] with homogeneous Dirichlet data, discretized at
/// `points` interior nodes: (1/dx^2) tridiag(1, -2, 1), dx = (b - a)/(points + 1).
struct Laplacian1DRepr {
  double a = 0.0;
  double b = 1.0;
  int points = 1;
  double spacing() const { return (b - a) / (points + 1); }
};

class ResolventSolver;

/// Finite-dimensional stand-in for the closed operator A. Immutable.
class LinOperator {
 public:
  using Repr = std::variant<DenseRepr, DiagonalRepr, Laplacian1DRepr>;

  static LinOperator dense(Eigen::MatrixXd matrix);
  static LinOperator diagonal(Eigen::VectorXd multipliers, std::vector<double> grid = {});
  static LinOperator laplacian1d(double a, double b, int points);
  static LinOperator zero(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const Repr& repr() const { return repr_; }
  const char* type_name() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// A X, applied column by column with the representation's fast path.
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& x) const;

  /// Solves (lambda I - A) x = y.
  Eigen::VectorXd resolve(double lambda, const Eigen::VectorXd& y) const;
  /// Factors lambda I - A once for repeated solves.
  ResolventSolver factor(double lambda) const;

  /// Estimate of the operator 2-norm.
  double norm_estimate() const;
  bool entrywise_nonneg() const;
  Eigen::MatrixXd materialize() const;

 private:
  LinOperator(Repr repr, Eigen::Index dim) : repr_(std::move(repr)), dim_(dim) {}

  Repr repr_;
  Eigen::Index dim_;
};

/// Factorization of lambda I - A for one lambda.
class ResolventSolver {
 public:
  Eigen::VectorXd solve(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd solve_columns(const Eigen::MatrixXd& y) const;
  Eigen::Index dim() const { return dim_; }
  double lambda() const { return lambda_; }

 private:
  friend class LinOperator;

  struct Tridiagonal {
    double off = 0.0;                // sub- and super-diagonal entry
    std::vector<double> pivots;      // eliminated diagonal
    std::vector<double> upper;       // normalized super-diagonal
  };
  using Factor = std::variant<Eigen::PartialPivLU<Eigen::MatrixXd>, Eigen::VectorXd, Tridiagonal>;

  ResolventSolver(Factor f, Eigen::Index dim, double lambda)
      : factor_(std::move(f)), dim_(dim), lambda_(lambda) {}

  Factor factor_;
  Eigen::Index dim_;
  double lambda_;
};

/// Closed-form eigenvalues of the Dirichlet Laplacian, ascending in k = 1..d.
std::vector<double> laplacian_eigenvalues(const Laplacian1DRepr& lap);

/// Exact 2-norm (largest singular value) of a dense matrix.
double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace dfrac
