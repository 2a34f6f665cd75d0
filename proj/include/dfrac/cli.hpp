#pragma once

#include <iosfwd>
#include <string>

namespace dfrac {

/// One command-line invocation.
struct RunConfig {
  std::string command;  // kernel | frac | resolvent | poisson | solve | example | selftest
  std::string target;   // example name, or frac kind (rl | caputo | sum)
  double alpha = 1.5;
  int n = 20;
  int dim = 40;
  std::string method = "auto";
  double tol = 1e-9;
  std::string op = "zero";           // resolvent operator descriptor
  std::string function = "exp:0.5";  // poisson function descriptor
  std::string config_path;
  std::string input_path;
  std::string out_path;
  std::string format = "csv";
};

/// Executes the command. The artifact goes to `out_path` (and a `.json`
/// sidecar for CSV solutions) or to `out` when no path is set; the summary
/// goes to `out` when writing files and to `err` otherwise. Returns 0 iff
/// every verification performed passed.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dfrac
