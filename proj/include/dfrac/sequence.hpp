#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dfrac {

/// Finite real sequence u(0..N).
using ScalarSeq = std::vector<double>;

/// Horizon N of a nonempty scalar sequence.
inline int horizon(const ScalarSeq& u) { return static_cast<int>(u.size()) - 1; }

/// Finite sequence of states in R^d indexed 0..N, stored column-wise: column
/// n of matrix() is u(n).
class VecSeq {
 public:
  VecSeq() = default;
  VecSeq(Eigen::Index dim, int horizon);
  explicit VecSeq(Eigen::MatrixXd states);

  /// Lifts a scalar sequence to d = 1.
  static VecSeq from_scalar(const ScalarSeq& u);
  /// u ⊗ x: scalar sequence times a fixed vector.
  static VecSeq outer(const ScalarSeq& u, const Eigen::VectorXd& x);

  Eigen::Index dim() const { return states_.rows(); }
  int horizon() const { return static_cast<int>(states_.cols()) - 1; }
  bool empty() const { return states_.cols() == 0; }

  auto state(int n) { return states_.col(n); }
  auto state(int n) const { return states_.col(n); }

  const Eigen::MatrixXd& matrix() const { return states_; }
  Eigen::MatrixXd& matrix() { return states_; }

  ScalarSeq component(Eigen::Index i) const;
  bool all_finite() const { return states_.allFinite(); }

 private:
  Eigen::MatrixXd states_;
};

}  // namespace dfrac
