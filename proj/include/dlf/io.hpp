#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dlf/basis.hpp"
#include "dlf/interp.hpp"
#include "dlf/solver.hpp"

namespace dlf {

using json = nlohmann::json;

/// Node choice for one dimension; `values` is used by the user scheme.
struct NodeSpec {
  NodeScheme scheme = NodeScheme::ChebyshevGaussLobatto;
  std::vector<double> values;
};

/// Everything needed to build one DlfBasis.
struct BasisSpec {
  PsiSpec family;
  NodeSpec nodes;
  std::size_t N = 8;
  double a = -1.0;
  double b = 1.0;
};

PsiSpec psi_spec_from_json(const json& j);
json psi_spec_to_json(const PsiSpec& spec);
NodeSpec node_spec_from_json(const json& j);

/// Numbers, or the strings "inf" / "-inf".
double json_number(const json& j, const std::string& what);

DlfBasis build_basis(const BasisSpec& spec);

json interpolant_to_json(const Interpolant& interp);
json interpolant_to_json(const TensorInterpolant& interp);

/// A collocation problem as read from a config file, before N is fixed.
struct ProblemConfig {
  CollocationProblem problem;
  std::vector<PsiSpec> families;  // one per dimension
  std::vector<NodeSpec> nodes;
  std::vector<std::size_t> N;
  std::optional<expr::Expr> exact;
  SolveOptions options;
  std::optional<expr::Expr> initial_guess;
  std::size_t samples = 21;  // per dimension, for sample tables and error sweeps
};

ProblemConfig problem_config_from_json(const json& j);
ProblemConfig load_problem_config(const std::string& path);
json load_json_file(const std::string& path);

/// Bases for the configured N (one entry per dimension).
std::vector<DlfBasis> build_problem_bases(const ProblemConfig& config,
                                          const std::vector<std::size_t>& N);

/// Assembles, applies the configured initial guess, and solves.
CollocationSystem assemble_problem(const ProblemConfig& config, const std::vector<DlfBasis>& bases);
SolveResult solve_problem(const ProblemConfig& config, const CollocationSystem& system);

/// Equispaced sample points per dimension (tensor grid, last fastest).
std::vector<std::vector<double>> sample_grid(const ProblemConfig& config);

/// max |u_N - exact| over the sample grid.
double sampled_max_error(const ProblemConfig& config, const SolveResult& result);

/// "%.17g".
std::string format_double(double v);

}  // namespace dlf
