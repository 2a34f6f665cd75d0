#include "dfrac/selftest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <random>
#include <string>

#include "dfrac/errors.hpp"
#include "dfrac/examples.hpp"
#include "dfrac/fracdiff.hpp"
#include "dfrac/kernels.hpp"
#include "dfrac/linop.hpp"
#include "dfrac/poisson.hpp"
#include "dfrac/resolvent.hpp"
#include "dfrac/solver.hpp"
#include "dfrac/weights.hpp"

namespace dfrac {

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

ScalarSeq random_seq(Rng& rng, int N) {
  ScalarSeq u(static_cast<std::size_t>(N) + 1);
  for (double& x : u) x = uniform(rng, -1.0, 1.0);
  return u;
}

VecSeq random_vecseq(Rng& rng, Eigen::Index d, int N) {
  VecSeq u(d, N);
  for (int n = 0; n <= N; ++n) {
    for (Eigen::Index i = 0; i < d; ++i) u.state(n)(i) = uniform(rng, -1.0, 1.0);
  }
  return u;
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index d) {
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = uniform(rng, -1.0, 1.0);
  return v;
}

/// Random dense matrix with entries in [0, 1) rescaled to the given 2-norm.
Eigen::MatrixXd random_nonneg_matrix(Rng& rng, Eigen::Index d, double norm) {
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = uniform(rng, 0.0, 1.0);
  }
  return m * (norm / spectral_norm(m));
}

/// Random dense Gaussian matrix rescaled to the given 2-norm.
Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index d, double norm) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = gauss(rng);
  }
  return m * (norm / spectral_norm(m));
}

double rel(double computed, double exact) {
  if (computed == exact) return 0.0;
  return std::fabs(computed - exact) / std::fabs(exact);
}

CheckResult make(int id, std::string name) {
  CheckResult c;
  c.id = (id < 10 ? "0" : "") + std::to_string(id);
  c.name = std::move(name);
  return c;
}

CheckResult kernel_semigroup() {
  CheckResult c = make(1, "kernel semigroup k^a * k^b = k^(a+b)");
  const auto start = Clock::now();
  const double orders[] = {0.3, 0.7, 1.5, 1.9};
  constexpr int N = 200;
  double worst = 0.0;
  for (double a : orders) {
    for (double b : orders) {
      const ScalarSeq lhs = conv(cesaro_kernel(a, N), cesaro_kernel(b, N));
      const ScalarSeq rhs = cesaro_kernel(a + b, N);
      for (int n = 0; n <= N; ++n) worst = std::max(worst, rel(lhs[n], rhs[n]));
    }
  }
  c.measure("max rel", worst, 1e-12);
  c.measure("runtime s", std::chrono::duration<double>(Clock::now() - start).count(), 1.0);
  return c;
}

CheckResult generating_function() {
  CheckResult c = make(2, "generating function sum k^a(j) z^j = (1-z)^(-a)");
  double worst = 0.0;
  for (double a : {0.3, 0.7, 1.5, 1.9}) {
    const ScalarSeq k = cesaro_kernel(a, 200);
    for (double z : {0.2, 0.5}) {
      const std::complex<double> partial = ztrans_partial(k, 1.0 / z, 200);
      worst = std::max(worst, rel(partial.real(), std::pow(1.0 - z, -a)));
      worst = std::max(worst, std::fabs(partial.imag()));
    }
  }
  c.measure("max rel", worst, 1e-10);
  return c;
}

CheckResult caputo_rl(Rng& rng) {
  CheckResult c = make(3, "Caputo = RL - initial-value corrections");
  const double alphas[] = {1.1, 1.5, 1.9};
  constexpr int N = 40;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const FracOrder order(alphas[trial % 3]);
    const Eigen::Index d = trial % 2 == 0 ? 1 : 3;
    const VecSeq u = random_vecseq(rng, d, N);
    const VecSeq cap = caputo_diff(order, u);
    const VecSeq rl = rl_diff(order, u);
    const ScalarSeq k = cesaro_kernel(2.0 - order.alpha(), N);
    for (int n = 0; n <= cap.horizon(); ++n) {
      const Eigen::VectorXd c1 = k[n + 1] * (u.state(1) - 2.0 * u.state(0));
      const Eigen::VectorXd c2 = k[n + 2] * u.state(0);
      const Eigen::VectorXd rhs = rl.state(n) - c1 - c2;
      for (Eigen::Index i = 0; i < d; ++i) {
        // Relative to the largest term of the identity, so that a component
        // that cancels to nearly zero is judged at its rounding level.
        const double scale = std::max({std::fabs(cap.state(n)(i)), std::fabs(rl.state(n)(i)), std::fabs(c1(i)),
                                       std::fabs(c2(i)), 1e-300});
        worst = std::max(worst, std::fabs(cap.state(n)(i) - rhs(i)) / scale);
      }
    }
  }
  c.measure("max componentwise rel", worst, 1e-11);
  return c;
}

CheckResult convolution_rule(Rng& rng) {
  CheckResult c = make(4, "difference of a convolution");
  constexpr int N = 32;
  double worst = 0.0;
  for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
    const FracOrder order(alpha);
    for (int trial = 0; trial < 5; ++trial) {
      const ScalarSeq u = random_seq(rng, N);
      const VecSeq v = random_vecseq(rng, 3, N);
      VecSeq direct_conv(3, N);
      for (Eigen::Index i = 0; i < 3; ++i) {
        const ScalarSeq w = conv(u, v.component(i));
        for (int n = 0; n <= N; ++n) direct_conv.state(n)(i) = w[n];
      }
      const VecSeq lhs = rl_diff(order, direct_conv);
      const VecSeq rhs = rl_diff_of_conv(order, u, v);
      worst = std::max(worst, (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff());
    }
  }
  c.measure("max abs", worst, 1e-12);
  return c;
}

CheckResult cross_method(Rng& rng, std::vector<ResolventFamily>& built) {
  CheckResult c = make(5, "resolvent recurrence vs series vs beta");
  const double alphas[] = {1.2, 1.5, 1.9};
  double worst_series = 0.0;
  double worst_beta = 0.0;
  int flagged = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 6);
    const double alpha = alphas[trial % 3];
    auto op = std::make_shared<const LinOperator>(LinOperator::dense(random_nonneg_matrix(rng, d, uniform(rng, 0.05, 0.5))));
    ResolventFamily rec = build_recurrence(op, alpha, 40);
    ResolventFamily ser = build_series(op, alpha, 40);
    ResolventFamily bet = build_beta(op, alpha, 15);
    worst_series = std::max(worst_series, max_relative_gap(rec, ser, 40));
    worst_beta = std::max(worst_beta, max_relative_gap(rec, bet, 15));
    if (bet.trusted_upto() < 15) ++flagged;
    built.push_back(std::move(rec));
    built.push_back(std::move(ser));
    built.push_back(std::move(bet));
  }
  c.measure("recurrence vs series (n <= 40)", worst_series, 1e-9);
  c.measure("recurrence vs beta (n <= 15)", worst_beta, 1e-7);
  if (flagged > 0) c.note(std::to_string(flagged) + " beta families flagged for cancellation before n = 15");
  return c;
}

CheckResult difference_equation(std::vector<ResolventFamily>& built) {
  CheckResult c = make(6, "Delta^a S(n) = A S(n+2) on every family");
  for (double alpha : {1.3, 1.6, 1.9}) {
    built.push_back(build_recurrence(std::make_shared<const LinOperator>(LinOperator::laplacian1d(0.0, std::numbers::pi, 40)), alpha, 50));
  }
  Eigen::VectorXd diag(4);
  diag << -0.8, -0.2, 0.0, 0.05;
  auto diag_op = std::make_shared<const LinOperator>(LinOperator::diagonal(diag));
  built.push_back(build_recurrence(diag_op, 1.5, 60));
  Eigen::VectorXd pos(4);
  pos << 0.05, 0.2, 0.5, 0.8;
  built.push_back(subordinate_family(std::make_shared<const LinOperator>(LinOperator::diagonal(pos)), 1.5, 60));
  built.push_back(build_recurrence(std::make_shared<const LinOperator>(LinOperator::zero(3)), 1.7, 40));
  built.push_back(build_recurrence(std::make_shared<const LinOperator>(LinOperator::dense(Eigen::MatrixXd::Constant(1, 1, 0.4))), 1.5, 60));
  Eigen::VectorXd neg(5);
  neg << -1.0, -3.0, -6.0, -10.0, -20.0;
  built.push_back(build_recurrence(std::make_shared<const LinOperator>(LinOperator::diagonal(neg)), 2.0, 50));

  double worst = 0.0;
  double worst_laplacian = 0.0;
  for (const auto& f : built) {
    const double r = difference_equation_residual(f);
    worst = std::max(worst, r);
    if (std::holds_alternative<Laplacian1DRepr>(f.op().repr())) worst_laplacian = std::max(worst_laplacian, r);
  }
  c.note(std::to_string(built.size()) + " families checked");
  c.measure("max residual", worst, 1e-9);
  c.measure("Laplacian d=40 residual", worst_laplacian, 1e-9);
  return c;
}

CheckResult beta_corollary() {
  CheckResult c = make(7, "sum_j beta_n(j) C(l+j, j) = k^(a(l+1))(n)");
  double worst = 0.0;
  for (double alpha : {1.3, 1.7}) {
    const BetaTable beta(alpha, 20);
    for (int l = 0; l <= 10; ++l) {
      const ScalarSeq k = cesaro_kernel(alpha * (l + 1), 20);
      for (int n = 1; n <= 20; ++n) {
        double sum = 0.0;
        for (int j = 1; j <= n; ++j) {
          double binom = 1.0;  // C(l + j, j)
          for (int i = 1; i <= j; ++i) binom = binom * (l + i) / i;
          sum += beta(n, j) * binom;
        }
        worst = std::max(worst, rel(sum, k[n]));
      }
    }
  }
  c.measure("max rel", worst, 1e-8);
  return c;
}

CheckResult ztransform() {
  CheckResult c = make(8, "Z-transform of S equals the resolvent");
  const std::vector<double> lambdas{2.0, 3.0, 5.0};
  double worst = 0.0;
  bool inconclusive = false;
  auto run = [&](std::shared_ptr<const LinOperator> op, double alpha, const std::vector<double>& ls) {
    const ResolventFamily f = build_recurrence(std::move(op), alpha, 60);
    const ZTransformReport r = verify_ztransform(f, ls);
    worst = std::max(worst, r.max_deviation);
    inconclusive = inconclusive || r.any_inconclusive;
  };
  for (double alpha : {1.3, 1.5, 1.9}) {
    for (double a : {0.0, -0.5, 0.05}) {
      run(std::make_shared<const LinOperator>(LinOperator::dense(Eigen::MatrixXd::Constant(1, 1, a))), alpha, lambdas);
    }
    Eigen::VectorXd diag(4);
    diag << -0.8, -0.2, 0.0, 0.05;
    run(std::make_shared<const LinOperator>(LinOperator::diagonal(diag)), alpha, lambdas);
  }
  run(std::make_shared<const LinOperator>(LinOperator::dense(Eigen::MatrixXd::Constant(1, 1, 0.4))), 1.5, {5.0});

  // A = 0 against the closed generating function ((lambda-1)/lambda)^{-alpha}.
  const ScalarSeq k = cesaro_kernel(1.5, 60);
  for (double lambda : lambdas) {
    worst = std::max(worst, rel(ztrans_partial(k, lambda, 60).real(), std::pow((lambda - 1.0) / lambda, -1.5)));
  }
  c.require(!inconclusive, "every sample conclusive (estimated tail below 1e-11)");
  c.measure("max rel deviation", worst, 1e-10);
  return c;
}

CheckResult solution_formulas(Rng& rng) {
  CheckResult c = make(9, "linear solution formulas");
  double worst_res = 0.0;
  double worst_ic = 0.0;
  double worst_scaling = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const double alpha = std::array{2.0, 1.3, 1.7, 2.0, 1.5, 1.9}[static_cast<std::size_t>(trial)];
    auto op = std::make_shared<const LinOperator>(LinOperator::dense(random_matrix(rng, 4, uniform(rng, 0.1, 3.0))));
    const ResolventFamily f = build_recurrence(op, alpha, 30);
    ProblemSpec p;
    p.alpha = FracOrder(alpha);
    p.op = op;
    p.u0 = random_vector(rng, 4);
    p.u1 = random_vector(rng, 4);
    p.horizon = 30;
    const VecSeq h = solve_homogeneous(p, f);
    worst_res = std::max(worst_res, residual(h, p));
    worst_ic = std::max(worst_ic, initial_condition_error(h, p));

    const VecSeq g = random_vecseq(rng, 4, 28);
    p.forcing = g;
    const VecSeq u = solve_inhomogeneous(p, f);
    worst_res = std::max(worst_res, residual(u, p));
    worst_ic = std::max(worst_ic, initial_condition_error(u, p));

    // Particular solution is linear in g.
    p.u0.setZero();
    p.u1.setZero();
    const VecSeq base = solve_inhomogeneous(p, f);
    p.forcing = VecSeq(Eigen::MatrixXd(3.0 * g.matrix()));
    const VecSeq scaled = solve_inhomogeneous(p, f);
    for (Eigen::Index j = 0; j < base.matrix().cols(); ++j) {
      for (Eigen::Index i = 0; i < 4; ++i) {
        const double b = 3.0 * base.matrix()(i, j);
        if (b != 0.0) worst_scaling = std::max(worst_scaling, rel(scaled.matrix()(i, j), b));
      }
    }
  }
  {
    auto op = std::make_shared<const LinOperator>(LinOperator::laplacian1d(0.0, std::numbers::pi, 40));
    const ResolventFamily f = build_recurrence(op, 1.6, 50);
    ProblemSpec p;
    p.alpha = FracOrder(1.6);
    p.op = op;
    p.u0 = random_vector(rng, 40);
    p.u1 = random_vector(rng, 40);
    p.horizon = 50;
    const VecSeq h = solve_homogeneous(p, f);
    worst_res = std::max(worst_res, residual(h, p));
    worst_ic = std::max(worst_ic, initial_condition_error(h, p));
  }
  c.measure("max residual", worst_res, 1e-9);
  c.measure("initial data", worst_ic, 1e-12);
  c.measure("linearity in g", worst_scaling, 1e-12);
  c.merge(multiplication_example(40, 50).checks);
  return c;
}

CheckResult poisson_closed_forms() {
  CheckResult c = make(10, "Poisson transform closed forms");
  double worst_exp = 0.0;
  double worst_g = 0.0;
  double worst_ml = 0.0;
  double worst_inner = 0.0;
  for (double lambda : {0.5, 2.0}) {
    const TimeFunction psi = exp_function(lambda);
    for (int n = 0; n <= 40; ++n) worst_exp = std::max(worst_exp, rel(poisson_transform_scalar(psi, n), std::pow(1.0 + lambda, -(n + 1.0))));
  }
  for (double a : {0.5, 1.3, 1.7, 2.5}) {
    const TimeFunction psi = galpha_function(a);
    const ScalarSeq k = cesaro_kernel(a, 40);
    for (int n = 0; n <= 40; ++n) worst_g = std::max(worst_g, rel(poisson_transform_scalar(psi, n), k[n]));
  }
  const double pairs[][2] = {{1.5, 1.5}, {1.3, 2.0}};
  for (const auto& ab : pairs) {
    const TimeFunction psi = ml_function(ab[0], ab[1], 0.3);
    for (int n = 0; n <= 40; ++n) {
      worst_ml = std::max(worst_ml, rel(poisson_transform_scalar(psi, n), poisson_ml_closed(ab[0], ab[1], 0.3, n)));
    }
  }
  const int idx[] = {0, 1, 2, 5, 10, 20, 40};
  for (int m : idx) {
    const TimeFunction pm = poisson_density_function(m);
    for (int n : idx) {
      const double exact = std::exp(std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                                    (n + m + 1.0) * std::log(2.0));
      worst_inner = std::max(worst_inner, rel(poisson_transform_scalar(pm, n), exact));
    }
  }
  c.measure("e_lambda", worst_exp, 1e-8);
  c.measure("g_alpha", worst_g, 1e-8);
  c.measure("Mittag-Leffler", worst_ml, 1e-8);
  c.measure("p_n p_m inner product", worst_inner, 1e-10);
  return c;
}

CheckResult sampling_identity() {
  CheckResult c = make(11, "P(D^a g_b)(n+2) = Delta^a P(g_b)(n)");
  double kernel = 0.0;
  double quad = 0.0;
  const double cases[][2] = {{3.0, 1.5}, {2.5, 1.2}, {2.9, 1.9}};
  for (const auto& bc : cases) {
    const SamplingReport r = verify_sampling_identity(bc[0], FracOrder(bc[1]), 40);
    kernel = std::max(kernel, r.kernel_route);
    quad = std::max(quad, r.quadrature_route);
  }
  c.measure("kernel route", kernel, 1e-12);
  c.measure("quadrature route", quad, 1e-8);
  return c;
}

CheckResult weighted_constants() {
  CheckResult c = make(12, "weight h(n) = n n!: H = 1/18");
  using u128 = unsigned __int128;
  constexpr int N = 18;
  std::vector<u128> fact(N + 2, 1);
  for (int n = 1; n <= N + 1; ++n) fact[n] = fact[n - 1] * static_cast<u128>(n);

  bool identity = true;
  u128 running = 0;
  for (int n = 1; n <= N; ++n) {
    running += static_cast<u128>(n) * fact[n];
    identity = identity && running == fact[n + 1] - 1;
  }
  c.require(identity, "sum_{k=1}^n k k! = (n+1)! - 1 for n <= 18");

  // Exact ratios r(n) = num/den; compare with 1/18 by cross-multiplication.
  int argmax = -1;
  bool bounded = true;
  for (int n = 1; n <= N; ++n) {
    u128 num = 0;
    for (int k = 0; k <= n - 2; ++k) num += static_cast<u128>(k) * fact[k];
    const u128 den = static_cast<u128>(n) * fact[n];
    if (num * 18 == den) argmax = argmax < 0 ? n : argmax;
    if (num * 18 > den) bounded = false;
  }
  c.require(bounded && argmax == 3, "exact sup of r(n) is 1/18, first attained at n = 3");

  const WeightedSpace w = admissibility(WeightSpec{}, N);
  c.require(w.H == 1.0 / 18.0, "floating H equals the rounded 1/18");
  c.require(w.argmax == 3, "floating argmax at n = 3");
  c.require(w.admissible, "n n! passes the admissibility heuristic");
  c.measure("|H - 1/18|", std::fabs(w.H - 1.0 / 18.0), 0.0);
  return c;
}

CheckResult heat() {
  CheckResult c = make(13, "heat example d = 40, N = 50");
  for (double alpha : {1.3, 1.6, 1.9}) {
    ExampleOutput out = heat_example(40, alpha, 50);
    for (auto& m : out.checks.measurements) m.label = "a=" + std::to_string(alpha).substr(0, 3) + " " + m.label;
    c.merge(out.checks);
  }
  return c;
}

CheckResult shifted() {
  CheckResult c = make(14, "shifted example on [pi, 2pi], d = 40");
  c.merge(shifted_example(40, 50).checks);
  return c;
}

}  // namespace

CheckResult run_criterion(int id, unsigned long long seed) {
  Rng rng((seed == 0 ? default_seed() : seed) + static_cast<unsigned long long>(id));
  std::vector<ResolventFamily> families;
  switch (id) {
    case 1: return kernel_semigroup();
    case 2: return generating_function();
    case 3: return caputo_rl(rng);
    case 4: return convolution_rule(rng);
    case 5: return cross_method(rng, families);
    case 6: {
      Rng rng5((seed == 0 ? default_seed() : seed) + 5ULL);
      cross_method(rng5, families);
      return difference_equation(families);
    }
    case 7: return beta_corollary();
    case 8: return ztransform();
    case 9: return solution_formulas(rng);
    case 10: return poisson_closed_forms();
    case 11: return sampling_identity();
    case 12: return weighted_constants();
    case 13: return heat();
    case 14: return shifted();
    default: throw UsageError("criterion id must be in 1..14");
  }
}

std::vector<CheckResult> run_selftest(unsigned long long seed) {
  std::vector<CheckResult> out;
  const auto start = Clock::now();
  for (int id = 1; id < kCriteriaCount; ++id) {
    const auto t0 = Clock::now();
    CheckResult c;
    try {
      c = run_criterion(id, seed);
    } catch (const std::exception& e) {
      c = make(id, "criterion " + std::to_string(id));
      c.require(false, std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.push_back(std::move(c));
  }
  CheckResult total = make(15, "full suite wall-clock");
  total.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  total.measure("seconds", total.seconds, 60.0);
  out.push_back(std::move(total));
  return out;
}

}  // namespace dfrac
