#pragma once

#include <string>

#include "dfrac/linop.hpp"
#include "dfrac/solver.hpp"
#include "dfrac/weights.hpp"

namespace dfrac {

/// Problem file contents, validated against the schema
///   {alpha, horizon, operator: {type, ...}, u0, u1, forcing: {type, payload},
///    weight: {kind}, method, solver}
/// State-dependent forcing payloads are {name: heat | linear | tanh, scale,
/// offset?, dx?, lipschitz?}; `offset` adds a constant source.
struct ProblemConfig {
  ProblemSpec problem;
  WeightSpec weight;
  std::string method = "auto";
  std::string solver = "auto";  // auto | linear | direct | picard
};

/// Parses problem JSON; errors name the source and the line of the
/// offending value ("problem.json:7: /operator/type: ...").
ProblemConfig parse_problem(const std::string& text, const std::string& source = "<config>");
ProblemConfig load_problem(const std::string& path);

/// Operator descriptor string used by the CLI: zero | laplacian |
/// scalar:<a> | diag:<m1>,<m2>,... ; `dim` sizes zero and laplacian.
LinOperator parse_operator_descriptor(const std::string& descriptor, int dim);

}  // namespace dfrac
