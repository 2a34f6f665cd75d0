#include <iostream>

#include <CLI11.hpp>

#include "dfrac/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete fractional difference equations: kernels, resolvent families, Poisson transforms and solvers"};
  app.require_subcommand(1);
  dfrac::RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "fractional order")->capture_default_str();
    sub->add_option("--beta", cfg.alpha, "alias of --alpha for kernel orders");
    sub->add_option("--n,--steps", cfg.n, "horizon N")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "output file (stdout if omitted)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--tol", cfg.tol, "tolerance for residual checks")->capture_default_str();
  };

  auto* kernel = app.add_subcommand("kernel", "Cesaro kernel k^alpha(0..N)");
  common(kernel);

  auto* frac = app.add_subcommand("frac", "fractional sum or difference of a CSV sequence");
  common(frac);
  frac->add_option("kind", cfg.target, "rl, caputo or sum")->check(CLI::IsMember({"rl", "caputo", "sum"}));
  frac->add_option("--input", cfg.input_path, "CSV with columns n,component_0,...")->required();

  auto* resolvent = app.add_subcommand("resolvent", "discrete resolvent family S(0..N)");
  common(resolvent);
  resolvent->add_option("--op", cfg.op, "zero | laplacian | scalar:<a> | diag:<m1>,...")->capture_default_str();
  resolvent->add_option("--dim", cfg.dim, "dimension for zero and laplacian")->capture_default_str();
  resolvent->add_option("--method", cfg.method, "auto | recurrence | series | beta | subordination")
      ->check(CLI::IsMember({"auto", "recurrence", "series", "beta", "subordination"}))
      ->capture_default_str();

  auto* poisson = app.add_subcommand("poisson", "Poisson transform of exp:<l>, galpha:<a> or ml:<a>,<b>,<l>");
  common(poisson);
  poisson->add_option("--function", cfg.function, "function descriptor")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "solve a problem described by a JSON file");
  common(solve);
  solve->add_option("--config", cfg.config_path, "problem JSON")->required();

  auto* example = app.add_subcommand("example", "run a worked example");
  common(example);
  example->add_option("name", cfg.target, "heat | multiplication | shifted | chebyshev")
      ->required()
      ->check(CLI::IsMember({"heat", "multiplication", "shifted", "chebyshev"}));
  example->add_option("--dim", cfg.dim, "grid points")->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--out", cfg.out_path, "write the JSON report here");
  selftest->add_option("--format", cfg.format, "csv (table) or json")->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "example" && example->count("--n") == 0) cfg.n = 50;
  if (cfg.command == "example" && example->count("--alpha") == 0 && cfg.target != "heat") cfg.alpha = 2.0;
  if (cfg.command == "example" && example->count("--alpha") == 0 && cfg.target == "heat") cfg.alpha = 1.6;
  return dfrac::run(cfg, std::cout, std::cerr);
}
