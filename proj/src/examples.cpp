#include "dfrac/examples.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "dfrac/errors.hpp"
#include "dfrac/linop.hpp"
#include "dfrac/reformulate.hpp"
#include "dfrac/resolvent.hpp"
#include "dfrac/solver.hpp"
#include "dfrac/weights.hpp"

namespace dfrac {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const VecSeq& u) { return u.empty() ? 0.0 : u.matrix().cwiseAbs().maxCoeff(); }

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

double max_rel_diff(const Eigen::MatrixXd& computed, const Eigen::MatrixXd& exact) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < exact.cols(); ++j) {
    for (Eigen::Index i = 0; i < exact.rows(); ++i) {
      const double e = exact(i, j);
      const double gap = std::fabs(computed(i, j) - e);
      if (gap == 0.0) continue;
      worst = std::max(worst, gap / std::fabs(e));
    }
  }
  return worst;
}

void check_picard(CheckResult& c, const std::string& tag, const ProblemSpec& p, const ResolventFamily& f,
                  const WeightedSpace& w, double lipschitz, VecSeq* direct_out = nullptr) {
  const VecSeq direct = solve_nonlinear_direct(p, f);
  const PicardResult picard = solve_nonlinear_picard(p, f, w);
  const double bound = f.sup_norm() * w.H * lipschitz;
  c.require(picard.converged, tag + ": Picard iteration converged");
  c.measure(tag + " picard-direct |.|_h",
            weighted_norm(VecSeq(Eigen::MatrixXd(picard.solution.matrix() - direct.matrix())), w), 1e-10);
  c.measure(tag + " contraction/(|S|H L)", bound > 0.0 ? picard.contraction_estimate / bound : picard.contraction_estimate,
            1.0 + 1e-6);
  c.measure(tag + " residual", residual(direct, p), 1e-9);
  if (direct_out != nullptr) *direct_out = direct;
}

}  // namespace

ExampleOutput heat_example(int dim, double alpha, int steps) {
  if (dim < 1 || steps < 4) throw UsageError("heat example needs dim >= 1 and steps >= 4");
  ExampleOutput out;
  out.name = "heat";
  out.checks.id = "heat";
  out.checks.name = "heat equation, alpha = " + std::to_string(alpha);

  auto op = std::make_shared<const LinOperator>(LinOperator::laplacian1d(0.0, kPi, dim));
  const double dx = kPi / (dim + 1);
  const double sdx = std::sqrt(dx);
  for (int i = 0; i < dim; ++i) out.grid.push_back((i + 1) * dx);
  Eigen::VectorXd sine(dim);
  for (int i = 0; i < dim; ++i) sine(i) = std::sin(out.grid[static_cast<std::size_t>(i)]);

  StateForcing paper;
  paper.fn = [sdx](int n, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const double c = std::sin(static_cast<double>(n)) / (1.0 + std::pow(n, 3.0));
    return c * v / (1.0 + sdx * v.norm());
  };
  paper.lipschitz = 2.0;
  paper.bound_m = [](int n) { return 1.0 / (1.0 + std::pow(n, 3.0)); };
  paper.bound_w = [sdx](double y) { return y / (1.0 + sdx * y); };
  paper.growth_c = 1.0;
  paper.label = "sin(n)/(1+n^3) v/(1+|v|)";

  StateForcing forced = paper;
  forced.fn = [sdx, sine](int n, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const double c = std::sin(static_cast<double>(n)) / (1.0 + std::pow(n, 3.0));
    return c * v / (1.0 + sdx * v.norm()) + sine / (1.0 + n);
  };
  forced.bound_m = nullptr;
  forced.bound_w = nullptr;
  forced.label = "paper forcing + sin(x)/(1+n)";

  const ResolventFamily family = build_recurrence(op, alpha, steps);
  const WeightedSpace w = admissibility(WeightSpec{}, steps);
  CheckResult& c = out.checks;

  ProblemSpec p;
  p.alpha = FracOrder(alpha);
  p.op = op;
  p.u0 = Eigen::VectorXd::Zero(dim);
  p.u1 = Eigen::VectorXd::Zero(dim);
  p.horizon = steps;
  p.forcing = paper;
  const VecSeq zero = solve_nonlinear_direct(p, family);
  c.require(max_abs(zero) == 0.0, "paper problem with zero data has the zero solution");
  const GrowthHypothesis g = growth_hypothesis(paper, dim, steps);
  c.require(g.satisfied, "growth hypothesis ||f(n,v)|| <= M(n) W(||v||) holds on samples");
  c.measure("growth bound ratio", g.worst_bound_ratio, 1.0 + 1e-12);

  p.forcing = forced;
  VecSeq u;
  check_picard(c, "forced", p, family, w, forced.lipschitz, &u);
  const double norm_h = weighted_norm(u, w);
  c.require(std::isfinite(norm_h), "weighted norm of the solution is finite");
  c.measure("initial data", initial_condition_error(u, p), 1e-12);

  const LipschitzHypothesis lh = lipschitz_hypothesis(family, w, 2.0);
  out.solution = std::move(u);
  out.stats = {{"alpha", alpha},
               {"sup_norm_S", family.sup_norm()},
               {"H", w.H},
               {"L", 2.0},
               {"L_S_H", lh.product},
               {"weighted_norm", norm_h},
               {"K_L2", dx * norm_h * norm_h},
               {"max_abs_u", max_abs(out.solution)}};
  return out;
}

ExampleOutput multiplication_example(int dim, int steps) {
  if (dim < 1 || steps < 4) throw UsageError("multiplication example needs dim >= 1 and steps >= 4");
  ExampleOutput out;
  out.name = "multiplication";
  out.checks.id = "multiplication";
  out.checks.name = "multiplication operator, alpha = 2";
  CheckResult& c = out.checks;

  Eigen::VectorXd m(dim);
  for (int i = 0; i < dim; ++i) {
    const double x = (i + 1.0) / (dim + 1.0);
    out.grid.push_back(x);
    m(i) = 0.1 + 0.3 * x;
  }
  auto op = std::make_shared<const LinOperator>(LinOperator::diagonal(m, out.grid));
  const ResolventFamily rec = build_recurrence(op, 2.0, steps);
  const ResolventFamily ser = build_series(op, 2.0, steps);

  // S(n) m-wise: (1/(2 sqrt m)) [(1 - sqrt m)^{-(n+1)} - (1 + sqrt m)^{-(n+1)}]
  auto s_closed = [](double mi, int n) {
    if (n < 0) return 0.0;
    const double r = std::sqrt(mi);
    return (std::pow(1.0 - r, -(n + 1.0)) - std::pow(1.0 + r, -(n + 1.0))) / (2.0 * r);
  };
  double gap_rec = 0.0;
  double gap_ser = 0.0;
  for (int n = 0; n <= steps; ++n) {
    Eigen::MatrixXd exact = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) exact(i, i) = s_closed(m(i), n);
    gap_rec = std::max(gap_rec, max_rel_diff(rec[n].diagonal(), exact.diagonal()));
    gap_ser = std::max(gap_ser, max_rel_diff(ser[n].diagonal(), exact.diagonal()));
    const Eigen::MatrixXd off_rec = rec[n] - Eigen::MatrixXd(rec[n].diagonal().asDiagonal());
    c.require(off_rec.cwiseAbs().maxCoeff() == 0.0, "S(n) stays diagonal");
  }
  c.measure("S recurrence vs closed form", gap_rec, 1e-9);
  c.measure("S series vs closed form", gap_ser, 1e-9);

  ProblemSpec p;
  p.alpha = FracOrder(2.0);
  p.op = op;
  p.u0 = Eigen::VectorXd::Ones(dim);
  p.u1 = Eigen::VectorXd(dim);
  for (int i = 0; i < dim; ++i) p.u1(i) = 1.0 + out.grid[static_cast<std::size_t>(i)];
  p.horizon = steps;
  const VecSeq u = solve_homogeneous(p, rec);

  // Expanded closed-form solution of Delta^2 u = A u(n+2).
  Eigen::MatrixXd exact(dim, steps + 1);
  for (int i = 0; i < dim; ++i) {
    const double mi = m(i);
    const double r = std::sqrt(mi);
    for (int n = 0; n <= steps; ++n) {
      const double a = std::pow(1.0 - r, -(n + 1.0));
      const double b = std::pow(1.0 + r, -(n + 1.0));
      const double an = std::pow(1.0 - r, -static_cast<double>(n));
      const double bn = std::pow(1.0 + r, -static_cast<double>(n));
      exact(i, n) = ((1.0 - mi) / 2.0 * (a - b) * p.u0(i) - (an - bn) * p.u0(i) + 0.5 * (an - bn) * (1.0 - mi) * p.u1(i)) / r;
    }
  }
  c.measure("solution vs closed form", max_rel_diff(u.matrix(), exact), 1e-9);
  c.measure("residual", residual(u, p), 1e-9);
  c.measure("initial data", initial_condition_error(u, p), 1e-12);

  out.solution = u;
  out.stats = {{"alpha", 2.0}, {"m_min", m.minCoeff()}, {"m_max", m.maxCoeff()}, {"max_abs_u", max_abs(u)}};
  return out;
}

ExampleOutput shifted_example(int dim, int steps, double gamma) {
  if (dim < 1 || steps < 4) throw UsageError("shifted example needs dim >= 1 and steps >= 4");
  ExampleOutput out;
  out.name = "shifted";
  out.checks.id = "shifted";
  out.checks.name = "shifted second-order problem on [pi, 2pi]";
  CheckResult& c = out.checks;

  Eigen::VectorXd bvals(dim);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) {
    x(i) = kPi + (i + 1) * kPi / (dim + 1);
    out.grid.push_back(x(i));
    bvals(i) = 2.0 * (1.0 / (1.0 + x(i)) - (1.0 + gamma));
  }
  const LinOperator b = LinOperator::diagonal(bvals, out.grid);
  auto t = std::make_shared<const LinOperator>(reformulate_shifted(b, gamma));
  const Eigen::MatrixXd expected = Eigen::MatrixXd((-x).asDiagonal());
  c.measure("T vs diag(-x)", max_abs_diff(t->materialize(), expected), 1e-10);

  const ResolventFamily family = build_recurrence(t, 2.0, steps);
  const WeightedSpace w = admissibility(WeightSpec{}, steps);
  const double t_norm = spectral_norm(t->materialize());
  c.measure("|T| - 2pi", t_norm - 2.0 * kPi, 1e-12);
  c.measure("sup|S(n)| - 1/sqrt(pi)", family.sup_norm() - 1.0 / std::sqrt(kPi), 1e-6);
  c.measure("|T| |S| H", t_norm * family.sup_norm() * w.H, 1.0 - 1e-12);

  const StateMap none = [dim](int, const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(dim); };
  const StateMap source = [x](int n, const Eigen::VectorXd&) -> Eigen::VectorXd {
    return (x.array().sin() * std::cos(static_cast<double>(n)) / (1.0 + n)).matrix();
  };

  ProblemSpec p;
  p.alpha = FracOrder(2.0);
  p.op = t;
  p.u0 = Eigen::VectorXd::Zero(dim);
  p.u1 = Eigen::VectorXd::Zero(dim);
  p.horizon = steps;
  p.forcing = shifted_forcing(t, none, 0.0);
  VecSeq zero;
  check_picard(c, "paper", p, family, w, t_norm, &zero);
  c.require(max_abs(zero) == 0.0, "paper problem with zero data has the zero solution");

  p.forcing = shifted_forcing(t, source, 0.0);
  VecSeq forced_zero_data;
  check_picard(c, "forced", p, family, w, t_norm, &forced_zero_data);
  c.measure("forced original residual", shifted_original_residual(forced_zero_data, b, gamma, source), 1e-9);

  p.u0 = x.array().sin().matrix();
  p.u1 = x.array().cos().matrix();
  const VecSeq u = solve_nonlinear_direct(p, family);
  c.measure("forced, nonzero data: residual", residual(u, p), 1e-9);
  c.measure("forced, nonzero data: original residual", shifted_original_residual(u, b, gamma, source), 1e-9);
  c.measure("initial data", initial_condition_error(u, p), 1e-12);
  c.note("the bound sqrt(pi) on sup|S(n)| is replaced by the sharper 1/sqrt(pi)");

  out.solution = u;
  out.stats = {{"gamma", gamma},
               {"norm_T", t_norm},
               {"sup_norm_S", family.sup_norm()},
               {"H", w.H},
               {"T_S_H", t_norm * family.sup_norm() * w.H},
               {"max_abs_u", max_abs(u)}};
  return out;
}

ExampleOutput chebyshev_example(int dim, int steps) {
  if (dim < 1 || steps < 4) throw UsageError("chebyshev example needs dim >= 1 and steps >= 4");
  ExampleOutput out;
  out.name = "chebyshev";
  out.checks.id = "chebyshev";
  out.checks.name = "Chebyshev recurrence via the shifted reformulation";
  CheckResult& c = out.checks;

  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) {
    x(i) = (i + 1.0) / dim;
    out.grid.push_back(x(i));
  }
  const LinOperator a = LinOperator::diagonal((2.0 * (x.array() - 1.0)).matrix(), out.grid);
  auto t = std::make_shared<const LinOperator>(reformulate_shifted(a, 0.0));
  const Eigen::MatrixXd expected = Eigen::MatrixXd((1.0 - x.array().inverse()).matrix().asDiagonal());
  c.measure("T vs diag(1 - 1/x)", max_abs_diff(t->materialize(), expected), 1e-10);

  const ResolventFamily family = build_recurrence(t, 2.0, steps);
  const StateMap none = [dim](int, const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(dim); };

  ProblemSpec p;
  p.alpha = FracOrder(2.0);
  p.op = t;
  p.horizon = steps;
  p.forcing = shifted_forcing(t, none, 0.0);

  // First kind: T(0) = 1, T(1) = x; second kind: U(0) = 1, U(1) = 2x.
  p.u0 = Eigen::VectorXd::Ones(dim);
  p.u1 = x;
  const VecSeq first = solve_nonlinear_direct(p, family);
  Eigen::MatrixXd cheb(dim, steps + 1);
  for (int i = 0; i < dim; ++i) {
    for (int n = 0; n <= steps; ++n) cheb(i, n) = std::cos(n * std::acos(x(i)));
  }
  c.measure("first kind vs cos(n arccos x)", max_abs_diff(first.matrix(), cheb), 1e-9);
  c.measure("first kind original residual", shifted_original_residual(first, a, 0.0, none), 1e-9);

  p.u1 = 2.0 * x;
  const VecSeq second = solve_nonlinear_direct(p, family);
  Eigen::MatrixXd u2(dim, steps + 1);
  u2.col(0).setOnes();
  u2.col(1) = 2.0 * x;
  for (int n = 2; n <= steps; ++n) u2.col(n) = 2.0 * x.cwiseProduct(u2.col(n - 1)) - u2.col(n - 2);
  const double scale = std::max(1.0, u2.cwiseAbs().maxCoeff());
  c.measure("second kind vs recurrence (rel)", max_abs_diff(second.matrix(), u2) / scale, 1e-9);
  c.measure("second kind original residual", shifted_original_residual(second, a, 0.0, none), 1e-9);

  out.solution = first;
  out.stats = {{"norm_T", spectral_norm(t->materialize())}, {"sup_norm_S", family.sup_norm()}};
  return out;
}

ExampleOutput run_example(const std::string& name, int dim, double alpha, int steps) {
  if (name == "heat") return heat_example(dim, alpha, steps);
  if (name == "multiplication") return multiplication_example(dim, steps);
  if (name == "shifted") return shifted_example(dim, steps);
  if (name == "chebyshev") return chebyshev_example(dim, steps);
  throw UsageError("unknown example '" + name + "' (expected heat, multiplication, shifted, chebyshev)");
}

}  // namespace dfrac
