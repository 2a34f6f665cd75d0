#include "dfrac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>

#include "dfrac/errors.hpp"
#include "dfrac/fracdiff.hpp"

namespace dfrac {

namespace {

bool is_zero(const Eigen::VectorXd& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0; }

void check_family(const ProblemSpec& p, const ResolventFamily& f) {
  p.validate();
  if (f.alpha().alpha() != p.alpha.alpha()) throw UsageError("resolvent family built for a different alpha");
  if (f.dim() != p.dim()) throw UsageError("resolvent family dimension differs from the problem");
  if (f.horizon() < p.horizon) throw UsageError("resolvent family horizon shorter than the problem horizon");
}

VecSeq homogeneous_part(const ProblemSpec& p, const ResolventFamily& f) {
  const Eigen::VectorXd a0 = p.u0 - p.op->apply(p.u0);
  const Eigen::VectorXd a1 = p.u1 - p.op->apply(p.u1);
  const double alpha = p.alpha.alpha();
  VecSeq u(p.dim(), p.horizon);
  for (int n = 0; n <= p.horizon; ++n) {
    Eigen::VectorXd v = f[n] * a0;
    if (n >= 1) v += f[n - 1] * (a1 - alpha * p.u0);
    u.state(n) = v;
  }
  return u;
}

// Adds sum_{k=0}^{n-2} S(n-2-k) g(k) to u(n).
void add_duhamel(const ResolventFamily& f, const std::vector<Eigen::VectorXd>& g, int n, VecSeq& u) {
  for (int k = 0; k <= n - 2; ++k) u.state(n) += f[n - 2 - k] * g[static_cast<std::size_t>(k)];
}

Eigen::VectorXd checked_call(const StateForcing& sf, int n, const Eigen::VectorXd& x) {
  Eigen::VectorXd y = sf.fn(n, x);
  if (y.size() != x.size()) throw ForcingError("forcing returned a vector of the wrong size at n = " + std::to_string(n), n);
  if (!y.allFinite()) throw ForcingError("forcing returned a non-finite value at n = " + std::to_string(n), n);
  return y;
}

const StateForcing& state_forcing(const ProblemSpec& p, const char* who) {
  const auto* sf = std::get_if<StateForcing>(&p.forcing);
  if (sf == nullptr) throw UsageError(std::string(who) + ": problem has no state-dependent forcing");
  return *sf;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!op) throw UsageError("problem has no operator");
  if (!alpha.solver_range()) throw DomainError("solvers require 1 < alpha <= 2");
  if (horizon < 2) throw UsageError("problem horizon must be >= 2");
  const Eigen::Index d = op->dim();
  if (u0.size() != d || u1.size() != d) throw UsageError("initial data dimension differs from the operator");
  if (const auto* g = std::get_if<VecSeq>(&forcing)) {
    if (g->dim() != d) throw UsageError("forcing dimension differs from the operator");
    if (g->horizon() < horizon - 2) throw UsageError("forcing sequence must cover 0..N-2");
  }
  if (const auto* sf = std::get_if<StateForcing>(&forcing)) {
    if (!sf->fn) throw UsageError("state-dependent forcing has no callback");
    if (!(sf->lipschitz >= 0.0) || !std::isfinite(sf->lipschitz)) throw DomainError("declared Lipschitz constant must be finite and >= 0");
  }
}

Eigen::VectorXd ProblemSpec::forcing_at(int n, const Eigen::VectorXd& x) const {
  if (const auto* g = std::get_if<VecSeq>(&forcing)) return g->state(n);
  if (const auto* sf = std::get_if<StateForcing>(&forcing)) return checked_call(*sf, n, x);
  return Eigen::VectorXd::Zero(dim());
}

VecSeq solve_homogeneous(const ProblemSpec& p, const ResolventFamily& f) {
  check_family(p, f);
  if (!std::holds_alternative<NoForcing>(p.forcing)) throw UsageError("solve_homogeneous: problem has a forcing term");
  return homogeneous_part(p, f);
}

VecSeq solve_inhomogeneous(const ProblemSpec& p, const ResolventFamily& f) {
  check_family(p, f);
  if (std::holds_alternative<StateForcing>(p.forcing)) {
    throw UsageError("solve_inhomogeneous: state-dependent forcing needs a nonlinear solver");
  }
  VecSeq u = homogeneous_part(p, f);
  const auto* seq = std::get_if<VecSeq>(&p.forcing);
  if (seq == nullptr) return u;
  std::vector<Eigen::VectorXd> g;
  for (int k = 0; k <= p.horizon - 2; ++k) g.emplace_back(seq->state(k));
  for (int n = 2; n <= p.horizon; ++n) add_duhamel(f, g, n, u);
  return u;
}

VecSeq solve_nonlinear_direct(const ProblemSpec& p, const ResolventFamily& f, bool check_lipschitz) {
  check_family(p, f);
  const StateForcing& sf = state_forcing(p, "solve_nonlinear_direct");
  if (check_lipschitz) lipschitz_spot_check(sf, p.dim(), p.horizon);
  VecSeq u = homogeneous_part(p, f);
  std::vector<Eigen::VectorXd> g;
  for (int n = 0; n <= p.horizon; ++n) {
    if (n >= 2) add_duhamel(f, g, n, u);
    g.push_back(checked_call(sf, n, u.state(n)));
  }
  return u;
}

PicardResult solve_nonlinear_picard(const ProblemSpec& p, const ResolventFamily& f, const WeightedSpace& w,
                                    double tol, int max_iter) {
  check_family(p, f);
  const StateForcing& sf = state_forcing(p, "solve_nonlinear_picard");
  if (!is_zero(p.u0) || !is_zero(p.u1)) throw UsageError("Picard iteration requires u(0) = u(1) = 0");
  if (w.horizon() < p.horizon) throw UsageError("weight window shorter than the problem horizon");

  PicardResult out;
  VecSeq current(p.dim(), p.horizon);
  double previous_step = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<Eigen::VectorXd> g;
    g.reserve(static_cast<std::size_t>(p.horizon) + 1);
    for (int n = 0; n <= p.horizon; ++n) g.push_back(checked_call(sf, n, current.state(n)));
    VecSeq next(p.dim(), p.horizon);
    for (int n = 2; n <= p.horizon; ++n) add_duhamel(f, g, n, next);

    const VecSeq diff(Eigen::MatrixXd(next.matrix() - current.matrix()));
    const double step = weighted_norm(diff, w);
    const double sup_step = diff.matrix().cwiseAbs().maxCoeff();
    const double sup_scale = std::max(1.0, next.matrix().cwiseAbs().maxCoeff());
    // Ratios of steps at roundoff level say nothing about the contraction.
    if (previous_step > 0.0 && sup_step > 1e-13 * sup_scale) {
      out.contraction_estimate = std::max(out.contraction_estimate, step / previous_step);
    }
    current = std::move(next);
    out.iterations = it;
    out.last_step = step;
    // The weighted step alone lets the late entries lag by a factor h(n);
    // the plain sup step must settle too.
    if (step < tol * std::max(1.0, weighted_norm(current, w)) && sup_step < tol * sup_scale) {
      out.converged = true;
      break;
    }
    previous_step = step;
  }
  out.solution = std::move(current);
  return out;
}

double residual(const VecSeq& u, const ProblemSpec& p) {
  p.validate();
  if (u.horizon() < 4) throw UsageError("residual: horizon must be >= 4");
  if (u.dim() != p.dim()) throw UsageError("residual: dimension mismatch");
  const VecSeq du = rl_diff(p.alpha, u);
  double worst = 0.0;
  for (int n = 0; n <= du.horizon(); ++n) {
    const Eigen::VectorXd r = du.state(n) - p.op->apply(u.state(n + 2)) - p.forcing_at(n, u.state(n));
    worst = std::max(worst, r.norm());
  }
  double scale = 1.0;
  for (int n = 0; n <= u.horizon(); ++n) scale = std::max(scale, u.state(n).norm());
  return worst / scale;
}

double initial_condition_error(const VecSeq& u, const ProblemSpec& p) {
  const double e0 = (u.state(0) - p.u0).cwiseAbs().maxCoeff();
  const double e1 = (u.state(1) - p.u1).cwiseAbs().maxCoeff();
  return std::max(e0, e1) / (1.0 + p.u0.norm() + p.u1.norm());
}

unsigned long long default_seed() {
  if (const char* env = std::getenv("FRACDIFF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("FRACDIFF_SEED is not an unsigned integer: ") + env);
    }
  }
  return 20240101ULL;
}

double lipschitz_spot_check(const StateForcing& f, Eigen::Index dim, int horizon, int pairs,
                            unsigned long long seed) {
  std::mt19937_64 rng(seed == 0 ? default_seed() : seed);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> step(0, std::max(0, horizon));
  std::uniform_int_distribution<int> decade(-3, 3);
  auto random_vector = [&](double scale) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = scale * gauss(rng);
    return v;
  };
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const int n = step(rng);
    const Eigen::VectorXd x = random_vector(std::pow(10.0, decade(rng)));
    const Eigen::VectorXd y = x + random_vector(std::pow(10.0, decade(rng)));
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const double gap = (checked_call(f, n, x) - checked_call(f, n, y)).norm();
    worst = std::max(worst, gap / dist);
    if (gap > f.lipschitz * dist + 1e-9) {
      throw ForcingError("declared Lipschitz constant " + std::to_string(f.lipschitz) + " violated at n = " +
                             std::to_string(n) + " (observed ratio " + std::to_string(gap / dist) + ")",
                         n);
    }
  }
  return worst;
}

LipschitzHypothesis lipschitz_hypothesis(const ResolventFamily& f, const WeightedSpace& w, double L) {
  LipschitzHypothesis h;
  h.sup_norm = f.sup_norm();
  h.H = w.H;
  h.L = L;
  h.product = L * h.sup_norm * h.H;
  h.satisfied = h.product < 1.0;
  return h;
}

GrowthHypothesis growth_hypothesis(const StateForcing& f, Eigen::Index dim, int horizon,
                                   unsigned long long seed, int samples) {
  GrowthHypothesis g;
  g.continuous = std::isfinite(f.lipschitz);
  if (!f.bound_m || !f.bound_w) return g;
  g.declared = true;
  for (int n = 0; n <= horizon; ++n) g.m_sup = std::max(g.m_sup, f.bound_m(n));

  std::mt19937_64 rng(seed == 0 ? default_seed() : seed);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> step(0, std::max(0, horizon));
  std::uniform_int_distribution<int> decade(-3, 3);
  g.bound_holds = true;
  g.linear_w = f.growth_c > 0.0;
  for (int i = 0; i < samples; ++i) {
    const int n = step(rng);
    const double scale = std::pow(10.0, decade(rng));
    Eigen::VectorXd x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) x(j) = scale * gauss(rng);
    const double y = x.norm();
    const double value = checked_call(f, n, x).norm();
    const double bound = f.bound_m(n) * f.bound_w(y);
    if (bound > 0.0) {
      g.worst_bound_ratio = std::max(g.worst_bound_ratio, value / bound);
    } else if (value > 0.0) {
      g.worst_bound_ratio = std::numeric_limits<double>::infinity();
    }
    if (f.bound_w(y) > f.growth_c * y * (1.0 + 1e-12)) g.linear_w = false;
  }
  g.bound_holds = g.worst_bound_ratio <= 1.0 + 1e-12;
  g.satisfied = g.bound_holds && g.linear_w && std::isfinite(g.m_sup) && g.continuous;
  return g;
}

}  // namespace dfrac
