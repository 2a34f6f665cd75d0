#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "dfrac/kernels.hpp"
#include "dfrac/linop.hpp"
#include "dfrac/resolvent.hpp"
#include "dfrac/sequence.hpp"
#include "dfrac/weights.hpp"

namespace dfrac {

struct NoForcing {};

/// f(n, x) together with the constants the callback declares about itself:
/// ||f(n,x) - f(n,y)|| <= L ||x - y|| and ||f(n,x)|| <= M(n) W(||x||).
/// Callbacks must be pure in (n, x).
struct StateForcing {
  std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)> fn;
  double lipschitz = 0.0;
  std::function<double(int)> bound_m;      // optional
  std::function<double(double)> bound_w;   // optional
  double growth_c = 0.0;                   // W(y) <= C y, 0 if undeclared
  std::string label;
};

/// g(0..N-2) as a sequence, or a state-dependent callback.
using Forcing = std::variant<NoForcing, VecSeq, StateForcing>;

/// Delta^alpha u(n) = A u(n+2) + f(n, u(n)), u(0) = u0, u(1) = u1, on 0..N.
struct ProblemSpec {
  FracOrder alpha{1.5};
  std::shared_ptr<const LinOperator> op;
  Eigen::VectorXd u0;
  Eigen::VectorXd u1;
  Forcing forcing;
  int horizon = 0;

  Eigen::Index dim() const { return op ? op->dim() : 0; }
  /// Throws UsageError or DomainError on inconsistent data.
  void validate() const;
  /// Value of the forcing at step n for state x.
  Eigen::VectorXd forcing_at(int n, const Eigen::VectorXd& x) const;
};

/// u(n) = S(n)(I - A)u0 - alpha S(n-1) u0 + S(n-1)(I - A) u1, S(-1) = 0.
VecSeq solve_homogeneous(const ProblemSpec& p, const ResolventFamily& f);

/// Homogeneous part plus sum_{k<=n-2} S(n-2-k) g(k).
VecSeq solve_inhomogeneous(const ProblemSpec& p, const ResolventFamily& f);

/// Explicit recursion u(n) = hom(n) + sum_{k<=n-2} S(n-2-k) f(k, u(k)).
/// Nonzero initial data are admitted and carried by the homogeneous part.
/// The declared Lipschitz constant is spot-checked first unless disabled.
VecSeq solve_nonlinear_direct(const ProblemSpec& p, const ResolventFamily& f,
                              bool check_lipschitz = true);

struct PicardResult {
  VecSeq solution;
  int iterations = 0;
  double contraction_estimate = 0.0;
  double last_step = 0.0;
  bool converged = false;
};

/// Fixed-point iteration of G(u)(n) = sum_{k<=n-2} S(n-2-k) f(k, u(k)) in
/// l_h^inf starting from 0. Requires zero initial data. Stops when both the
/// weighted and the plain sup-norm steps fall below tol relative to the
/// iterate.
PicardResult solve_nonlinear_picard(const ProblemSpec& p, const ResolventFamily& f,
                                    const WeightedSpace& w, double tol = 1e-13, int max_iter = 500);

/// max_{n<=N-2} ||Delta^alpha u(n) - A u(n+2) - f(n, u(n))|| / max(1, ||u||_inf),
/// evaluated with the fracdiff module.
double residual(const VecSeq& u, const ProblemSpec& p);

/// Max over n <= N of the initial-condition mismatch scale:
/// max(||u(0) - u0||, ||u(1) - u1||)_inf / (1 + ||u0|| + ||u1||).
double initial_condition_error(const VecSeq& u, const ProblemSpec& p);

/// Samples the declared Lipschitz constant on random pairs; throws
/// ForcingError when ||f(n,x) - f(n,y)|| exceeds L ||x - y|| by more than
/// 1e-9. Returns the largest observed ratio.
double lipschitz_spot_check(const StateForcing& f, Eigen::Index dim, int horizon,
                            int pairs = 1000, unsigned long long seed = 0);

/// Seed from FRACDIFF_SEED, falling back to a fixed default.
unsigned long long default_seed();

struct LipschitzHypothesis {
  double sup_norm = 0.0;
  double H = 0.0;
  double L = 0.0;
  double product = 0.0;  // L ||S||_inf H
  bool satisfied = false;
};

LipschitzHypothesis lipschitz_hypothesis(const ResolventFamily& f, const WeightedSpace& w, double L);

/// Sampled check of ||f(k,x)|| <= M(k) W(||x||), sup M < inf and W(y) <= C y.
/// Continuity and the compactness condition hold automatically in finite
/// dimension with a Lipschitz callback and are reported as such.
struct GrowthHypothesis {
  bool declared = false;
  double m_sup = 0.0;
  double worst_bound_ratio = 0.0;  // max ||f(k,x)|| / (M(k) W(||x||))
  bool bound_holds = false;
  bool linear_w = false;
  bool continuous = false;
  bool satisfied = false;
};

GrowthHypothesis growth_hypothesis(const StateForcing& f, Eigen::Index dim, int horizon,
                                   unsigned long long seed = 0, int samples = 200);

}  // namespace dfrac
