#include "dfrac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>

#include "dfrac/emit.hpp"
#include "dfrac/errors.hpp"
#include "dfrac/examples.hpp"
#include "dfrac/fracdiff.hpp"
#include "dfrac/json_config.hpp"
#include "dfrac/kernels.hpp"
#include "dfrac/poisson.hpp"
#include "dfrac/resolvent.hpp"
#include "dfrac/selftest.hpp"
#include "dfrac/solver.hpp"

namespace dfrac {

namespace {

using nlohmann::json;

struct Artifact {
  std::string body;          // main output, already formatted
  std::string sidecar;       // JSON written next to a CSV body, may be empty
  std::vector<CheckResult> checks;
  std::string summary;
};

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

json base_meta(const RunConfig& c) {
  return {{"alpha", c.alpha}, {"n", c.n}, {"format", c.format}};
}

Artifact finish(const RunConfig& c, json meta, json data, std::string csv, std::vector<CheckResult> checks,
                std::string summary) {
  Artifact a;
  const json doc = make_document(c.command, std::move(meta), std::move(data), checks);
  if (c.format == "json") {
    a.body = dump_json(doc);
  } else {
    a.body = std::move(csv);
    json side = doc;
    side.erase("data");
    a.sidecar = dump_json(side);
  }
  a.checks = std::move(checks);
  a.summary = std::move(summary);
  return a;
}

Artifact kernel_cmd(const RunConfig& c) {
  const ScalarSeq k = cesaro_kernel(c.alpha, c.n);
  std::vector<double> idx(k.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
  CheckResult chk;
  chk.id = "kernel";
  chk.name = "k(0) = 1, k(1) = alpha";
  chk.measure("|k(0) - 1|", std::fabs(k[0] - 1.0), 0.0);
  if (c.n >= 1) chk.measure("|k(1) - alpha|", std::fabs(k[1] - c.alpha), 0.0);
  return finish(c, base_meta(c), {{"n", idx}, {"value", k}}, columns_to_csv({"n", "value"}, {idx, k}), {chk},
                "kernel k^" + format_double(c.alpha) + "(0.." + std::to_string(c.n) + ")");
}

Artifact frac_cmd(const RunConfig& c) {
  if (c.input_path.empty()) throw UsageError("frac needs --input <csv> with columns n,component_0,...");
  const VecSeq u = vecseq_from_csv(read_file(c.input_path));
  const std::string kind = c.target.empty() ? "rl" : c.target;
  VecSeq v;
  std::vector<CheckResult> checks;
  if (kind == "sum") {
    v = frac_sum(c.alpha, u);
  } else if (kind == "rl" || kind == "caputo") {
    const FracOrder order(c.alpha);
    const VecSeq rl = rl_diff(order, u);
    const VecSeq cap = caputo_diff(order, u);
    const ScalarSeq k = cesaro_kernel(2.0 - c.alpha, u.horizon());
    double worst = 0.0;
    for (int n = 0; n <= rl.horizon(); ++n) {
      const Eigen::VectorXd rhs = rl.state(n) - k[n + 1] * (u.state(1) - 2.0 * u.state(0)) - k[n + 2] * u.state(0);
      worst = std::max(worst, (cap.state(n) - rhs).cwiseAbs().maxCoeff() / std::max(1.0, cap.state(n).cwiseAbs().maxCoeff()));
    }
    CheckResult chk;
    chk.id = "caputo_rl";
    chk.name = "Caputo = RL - initial-value corrections";
    chk.measure("max rel", worst, 1e-11);
    checks.push_back(chk);
    v = kind == "rl" ? rl : cap;
  } else {
    throw UsageError("frac kind must be rl, caputo or sum");
  }
  json meta = base_meta(c);
  meta["kind"] = kind;
  return finish(c, meta, vecseq_to_json(v), vecseq_to_csv(v), checks, "frac " + kind + " of order " + format_double(c.alpha));
}

Artifact resolvent_cmd(const RunConfig& c) {
  auto op = std::make_shared<const LinOperator>(parse_operator_descriptor(c.op, c.dim));
  const ResolventFamily f = c.method == "subordination" ? subordinate_family(op, c.alpha, c.n)
                                                        : build_family(op, c.alpha, c.n, c.method);
  CheckResult chk;
  chk.id = "resolvent";
  chk.name = "discrete resolvent identities";
  chk.measure("functional equation", functional_equation_residual(f), c.tol);
  if (f.horizon() >= 2) chk.measure("Delta^a S(n) = A S(n+2)", difference_equation_residual(f), c.tol);
  chk.measure("commutation", commutation_residual(f), 1e-10);
  if (c.op == "zero") {
    const ScalarSeq k = cesaro_kernel(c.alpha, c.n);
    double gap = 0.0;
    for (int n = 0; n <= c.n; ++n) {
      gap = std::max(gap, (f[n] - k[n] * Eigen::MatrixXd::Identity(f.dim(), f.dim())).cwiseAbs().maxCoeff() / k[n]);
    }
    chk.measure("S(n) = k(n) I", gap, 1e-14);
  }
  if (f.method() == ResolventMethod::beta && f.trusted_upto() < f.horizon()) {
    chk.note("beta values beyond n = " + std::to_string(f.trusted_upto()) + " flagged for cancellation");
  }
  std::vector<double> ns, rows, cols, vals;
  for (int n = 0; n <= f.horizon(); ++n) {
    for (Eigen::Index i = 0; i < f.dim(); ++i) {
      for (Eigen::Index j = 0; j < f.dim(); ++j) {
        ns.push_back(n);
        rows.push_back(static_cast<double>(i));
        cols.push_back(static_cast<double>(j));
        vals.push_back(f[n](i, j));
      }
    }
  }
  json meta = base_meta(c);
  meta["operator"] = c.op;
  meta["method"] = to_string(f.method());
  return finish(c, meta, family_to_json(f), columns_to_csv({"n", "row", "col", "value"}, {ns, rows, cols, vals}), {chk},
                "resolvent family (" + std::string(to_string(f.method())) + ") of " + c.op + ", N = " + std::to_string(c.n));
}

Artifact poisson_cmd(const RunConfig& c) {
  const TimeFunction psi = parse_time_function(c.function);
  if (psi.rows != 1 || psi.cols != 1) throw UsageError("poisson command handles scalar functions only");
  std::vector<double> idx, values, closed;
  const std::string head = c.function.substr(0, c.function.find(':'));
  const std::string args = c.function.substr(c.function.find(':') + 1);
  for (int n = 0; n <= c.n; ++n) {
    idx.push_back(n);
    values.push_back(poisson_transform_scalar(psi, n));
  }
  CheckResult chk;
  chk.id = "poisson";
  chk.name = "quadrature vs closed form";
  if (head == "exp") {
    const double lambda = std::stod(args);
    for (int n = 0; n <= c.n; ++n) closed.push_back(std::pow(1.0 + lambda, -(n + 1.0)));
  } else if (head == "galpha") {
    closed = cesaro_kernel(std::stod(args), c.n);
  } else if (head == "ml") {
    double a = 0, b = 0, l = 0;
    if (std::sscanf(args.c_str(), "%lf,%lf,%lf", &a, &b, &l) != 3) throw ConfigError("bad ml descriptor");
    for (int n = 0; n <= c.n; ++n) closed.push_back(poisson_ml_closed(a, b, l, n));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) worst = std::max(worst, std::fabs(values[i] - closed[i]) / std::fabs(closed[i]));
  chk.measure("max rel", worst, 1e-8);
  json meta = base_meta(c);
  meta["function"] = c.function;
  return finish(c, meta, {{"n", idx}, {"value", values}, {"closed_form", closed}},
                columns_to_csv({"n", "value", "closed_form"}, {idx, values, closed}), {chk},
                "Poisson transform of " + c.function);
}

Artifact solve_cmd(const RunConfig& c) {
  if (c.config_path.empty()) throw UsageError("solve needs --config <problem.json>");
  const ProblemConfig cfg = load_problem(c.config_path);
  const ProblemSpec& p = cfg.problem;
  const ResolventFamily f = build_family(p.op, p.alpha.alpha(), p.horizon, cfg.method);
  const WeightedSpace w = admissibility(cfg.weight, std::max(4, p.horizon));

  std::string solver = cfg.solver;
  if (solver == "auto") solver = std::holds_alternative<StateForcing>(p.forcing) ? "direct" : "linear";
  CheckResult chk;
  chk.id = "solve";
  chk.name = "solution diagnostics";
  json diag;
  VecSeq u;
  if (solver == "linear") {
    u = std::holds_alternative<NoForcing>(p.forcing) ? solve_homogeneous(p, f) : solve_inhomogeneous(p, f);
  } else if (solver == "direct") {
    u = solve_nonlinear_direct(p, f);
  } else {
    const PicardResult r = solve_nonlinear_picard(p, f, w);
    chk.require(r.converged, "Picard iteration converged");
    const auto& sf = std::get<StateForcing>(p.forcing);
    const LipschitzHypothesis lh = lipschitz_hypothesis(f, w, sf.lipschitz);
    diag["iterations"] = r.iterations;
    diag["contraction_estimate"] = r.contraction_estimate;
    diag["contraction_bound"] = lh.product;
    if (w.admissible) chk.measure("contraction / (L |S| H)", lh.product > 0 ? r.contraction_estimate / lh.product : 0.0, 1.0 + 1e-6);
    u = r.solution;
  }
  if (const auto* sf = std::get_if<StateForcing>(&p.forcing)) {
    const LipschitzHypothesis lh = lipschitz_hypothesis(f, w, sf->lipschitz);
    const GrowthHypothesis gh = growth_hypothesis(*sf, p.dim(), p.horizon);
    diag["lipschitz_hypothesis"] = {{"L", lh.L}, {"sup_norm", lh.sup_norm}, {"H", lh.H}, {"product", lh.product}, {"satisfied", lh.satisfied}};
    diag["growth_hypothesis"] = {{"declared", gh.declared}, {"m_sup", gh.m_sup}, {"bound_ratio", gh.worst_bound_ratio},
                                 {"linear_w", gh.linear_w}, {"continuous", gh.continuous}, {"satisfied", gh.satisfied}};
  }
  const double res = residual(u, p);
  const double norm_h = weighted_norm(u, w);
  chk.measure("residual", res, c.tol);
  chk.measure("initial data", initial_condition_error(u, p), 1e-12);
  diag["residual"] = res;
  diag["weighted_norm"] = std::isfinite(norm_h) ? json(norm_h) : json("inf");
  diag["H"] = w.H;
  diag["weight_admissible"] = w.admissible;
  diag["sup_norm_S"] = f.sup_norm();
  diag["method"] = to_string(f.method());
  diag["solver"] = solver;

  json meta = {{"config", c.config_path}, {"alpha", p.alpha.alpha()}, {"N", p.horizon}, {"d", p.dim()}, {"diagnostics", diag}};
  return finish(c, meta, vecseq_to_json(u), vecseq_to_csv(u), {chk},
                "solve " + c.config_path + ": residual " + format_double(res));
}

Artifact example_cmd(const RunConfig& c) {
  ExampleOutput ex = run_example(c.target, c.dim, c.alpha, c.n);
  json meta = {{"example", ex.name}, {"dim", c.dim}, {"steps", c.n}, {"alpha", c.alpha}, {"grid", ex.grid}};
  for (const auto& [key, value] : ex.stats) meta["stats"][key] = std::isfinite(value) ? json(value) : json("inf");
  return finish(c, meta, vecseq_to_json(ex.solution), vecseq_to_csv(ex.solution), {ex.checks}, "example " + ex.name);
}

Artifact selftest_cmd(const RunConfig& c) {
  const std::vector<CheckResult> checks = run_selftest();
  Artifact a;
  std::string table;
  for (const auto& chk : checks) table += chk.summary() + "\n";
  a.body = c.format == "json" || !c.out_path.empty() ? dump_json(make_document("selftest", json::object(), json::object(), checks))
                                                      : table;
  a.summary = c.out_path.empty() ? std::string() : table;
  a.checks = checks;
  return a;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
    Artifact a;
    if (c.command == "kernel") a = kernel_cmd(c);
    else if (c.command == "frac") a = frac_cmd(c);
    else if (c.command == "resolvent") a = resolvent_cmd(c);
    else if (c.command == "poisson") a = poisson_cmd(c);
    else if (c.command == "solve") a = solve_cmd(c);
    else if (c.command == "example") a = example_cmd(c);
    else if (c.command == "selftest") a = selftest_cmd(c);
    else throw UsageError("unknown command '" + c.command + "'");

    if (c.out_path.empty()) {
      out << a.body;
    } else {
      write_file(c.out_path, a.body);
      if (!a.sidecar.empty()) write_file(c.out_path + ".json", a.sidecar);
    }
    std::ostream& log = c.out_path.empty() ? err : out;
    const bool ok = all_passed(a.checks);
    if (c.command == "selftest") {
      log << a.summary;
    } else {
      for (const auto& chk : a.checks) {
        if (!chk.passed()) log << chk.summary() << "\n";
      }
    }
    if (!a.summary.empty() && c.command != "selftest") log << a.summary << ": ";
    log << (ok ? "all checks passed" : "CHECKS FAILED") << "\n";
    return ok ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
  } catch (const InadmissibleGrowthError& e) {
    err << "inadmissible growth: " << e.what() << "\n";
  } catch (const ResolventSetError& e) {
    err << "resolvent set error: " << e.what() << "\n";
  } catch (const MethodInapplicableError& e) {
    err << "method inapplicable: " << e.what() << "\n";
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
  } catch (const ForcingError& e) {
    err << "forcing error at n = " << e.index() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace dfrac
