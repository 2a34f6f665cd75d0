#include "dfrac/reformulate.hpp"

#include <algorithm>

#include "dfrac/errors.hpp"
#include "dfrac/kernels.hpp"

namespace dfrac {

namespace {

Eigen::MatrixXd identity_plus_resolvent(const LinOperator& b, double lambda, double scale) {
  const Eigen::Index d = b.dim();
  const ResolventSolver solver = b.factor(lambda);
  return Eigen::MatrixXd::Identity(d, d) + scale * solver.solve_columns(Eigen::MatrixXd::Identity(d, d));
}

double sup_state_norm(const VecSeq& u) {
  double s = 1.0;
  for (int n = 0; n <= u.horizon(); ++n) s = std::max(s, u.state(n).norm());
  return s;
}

}  // namespace

LinOperator reformulate_shifted(const LinOperator& b, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("reformulate_shifted: gamma must be >= 0");
  // (2(1+gamma) + B)^{-1} = -(lambda - B)^{-1} with lambda = -2(1+gamma).
  return LinOperator::dense(identity_plus_resolvent(b, -2.0 * (1.0 + gamma), 2.0));
}

LinOperator reformulate_delayed(const LinOperator& b) {
  return LinOperator::dense(identity_plus_resolvent(b, 1.0, -1.0));
}

StateForcing shifted_forcing(std::shared_ptr<const LinOperator> t, StateMap g, double g_lipschitz) {
  const Eigen::MatrixXd tm = t->materialize();
  const Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(tm.rows(), tm.cols()) - tm;
  StateForcing f;
  f.lipschitz = spectral_norm(tm) + spectral_norm(complement) * g_lipschitz;
  f.fn = [t, complement, g](int n, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return t->apply(x) + complement * g(n, x);
  };
  f.label = "shifted";
  return f;
}

double shifted_original_residual(const VecSeq& u, const LinOperator& b, double gamma, const StateMap& g) {
  const VecSeq d2 = forward_diff(u, 2);
  double worst = 0.0;
  for (int n = 0; n <= d2.horizon(); ++n) {
    const Eigen::VectorXd x = u.state(n + 1);
    const Eigen::VectorXd r = d2.state(n) - b.apply(x) - 2.0 * gamma * x - g(n, u.state(n));
    worst = std::max(worst, r.norm());
  }
  return worst / sup_state_norm(u);
}

VecSeq solve_delayed(const ResolventFamily& family, const StateMap& g, const Eigen::VectorXd& u0,
                     const Eigen::VectorXd& u1, int N) {
  if (family.alpha().alpha() != 2.0) throw UsageError("solve_delayed needs the alpha = 2 family");
  ProblemSpec p;
  p.alpha = FracOrder(2.0);
  p.op = family.op_ptr();
  p.u0 = u0;
  p.u1 = u1;
  p.horizon = N;
  VecSeq u = solve_homogeneous(p, family);

  const LinOperator& t = family.op();
  std::vector<Eigen::VectorXd> forcing;  // F(k) for k = 0..N-2
  for (int n = 2; n <= N; ++n) {
    const int k = n - 2;
    const Eigen::VectorXd x = u.state(k + 1);
    const Eigen::VectorXd gx = g(k + 1, x);
    if (!gx.allFinite()) throw ForcingError("forcing returned a non-finite value", k + 1);
    forcing.push_back(-2.0 * t.apply(x) + gx - t.apply(gx));
    for (int j = 0; j <= k; ++j) u.state(n) += family[k - j] * forcing[static_cast<std::size_t>(j)];
  }
  return u;
}

double delayed_original_residual(const VecSeq& u, const LinOperator& b, const StateMap& g) {
  const VecSeq d2 = forward_diff(u, 2);
  double worst = 0.0;
  for (int n = 0; n <= d2.horizon(); ++n) {
    const Eigen::VectorXd r = d2.state(n) - b.apply(u.state(n)) - g(n + 1, u.state(n + 1));
    worst = std::max(worst, r.norm());
  }
  return worst / sup_state_norm(u);
}

}  // namespace dfrac
