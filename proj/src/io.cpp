#include "dlf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <regex>

#include "dlf/error.hpp"

namespace dlf {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::ConfigError, what);
}

std::vector<double> number_list(const json& j, const std::string& what) {
  if (!j.is_array()) config_error("'" + what + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(json_number(v, what));
  return out;
}

int json_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) config_error("'" + what + "' must be an integer");
  return j.get<int>();
}

std::string json_string(const json& j, const std::string& what) {
  if (!j.is_string()) config_error("'" + what + "' must be a string");
  return j.get<std::string>();
}

expr::Expr json_expr(const json& j, const std::string& what) {
  if (j.is_number()) return expr::Expr::number(j.get<double>());
  return expr::parse_expr(json_string(j, what));
}

/// A per-dimension value: either one entry shared by all dimensions or a
/// list with one entry per dimension.
std::vector<json> per_dimension(const json& j, std::size_t p, const std::string& what,
                                bool value_is_array) {
  const bool listed = j.is_array() && (!value_is_array || (!j.empty() && j.front().is_array()));
  if (!listed) return std::vector<json>(p, j);
  if (j.size() != p)
    config_error("'" + what + "' lists " + std::to_string(j.size()) + " entries for " +
                 std::to_string(p) + " dimensions");
  return std::vector<json>(j.begin(), j.end());
}

const char* variant_name(RationalVariant v) {
  return v == RationalVariant::Shifted ? "shifted" : "ratio";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double json_number(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  config_error("'" + what + "' must be a number (or \"inf\")");
}

PsiSpec psi_spec_from_json(const json& j) {
  PsiSpec s;
  if (j.is_string()) {
    s.kind = psi_kind_from_string(j.get<std::string>());
    return s;
  }
  if (!j.is_object()) config_error("'family' must be an object or a kind name");
  for (const auto& [key, v] : j.items()) {
    if (key == "kind") s.kind = psi_kind_from_string(json_string(v, key));
    else if (key == "delta") s.delta = json_number(v, key);
    else if (key == "length") s.length = json_number(v, key);
    else if (key == "lengths") s.lengths = number_list(v, key);
    else if (key == "variant") {
      const auto name = json_string(v, key);
      if (name == "shifted") s.variant = RationalVariant::Shifted;
      else if (name == "ratio") s.variant = RationalVariant::Ratio;
      else config_error("rational variant must be 'ratio' or 'shifted'");
    } else if (key == "rate") s.rate = json_number(v, key);
    else if (key == "rates") s.rates = number_list(v, key);
    else if (key == "frequency") s.frequency = json_number(v, key);
    else if (key == "frequencies") s.frequencies = number_list(v, key);
    else if (key == "split") s.split = static_cast<std::size_t>(json_int(v, key));
    else if (key == "expression") s.expression = json_string(v, key);
    else if (key == "expression_order") s.expression_order = json_int(v, key);
    else config_error("unknown family key '" + key + "'");
  }
  return s;
}

json psi_spec_to_json(const PsiSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case PsiKind::Identity: break;
    case PsiKind::Fractional: j["delta"] = s.delta; break;
    case PsiKind::Generalized:
      j["expression"] = s.expression;
      j["expression_order"] = s.expression_order;
      break;
    case PsiKind::Rational:
      j["variant"] = variant_name(s.variant);
      if (s.lengths.empty()) j["length"] = s.length;
      else j["lengths"] = s.lengths;
      break;
    case PsiKind::Exponential:
      if (s.rates.empty()) j["rate"] = s.rate;
      else j["rates"] = s.rates;
      break;
    case PsiKind::FourierSin:
    case PsiKind::FourierCos:
      if (s.frequencies.empty()) j["frequency"] = s.frequency;
      else j["frequencies"] = s.frequencies;
      break;
    case PsiKind::Mixed:
      j["split"] = s.split;
      if (s.rates.empty()) j["rate"] = s.rate;
      else j["rates"] = s.rates;
      if (s.frequencies.empty()) j["frequency"] = s.frequency;
      else j["frequencies"] = s.frequencies;
      break;
  }
  return j;
}

NodeSpec node_spec_from_json(const json& j) {
  NodeSpec n;
  if (j.is_string()) {
    n.scheme = node_scheme_from_string(j.get<std::string>());
    return n;
  }
  if (!j.is_object()) config_error("'nodes' must be an object or a scheme name");
  for (const auto& [key, v] : j.items()) {
    if (key == "scheme") n.scheme = node_scheme_from_string(json_string(v, key));
    else if (key == "values") n.values = number_list(v, key);
    else config_error("unknown nodes key '" + key + "'");
  }
  if (n.scheme == NodeScheme::UserSupplied && n.values.empty())
    config_error("user node scheme needs 'values'");
  if (n.scheme != NodeScheme::UserSupplied && !n.values.empty())
    n.scheme = NodeScheme::UserSupplied;
  return n;
}

DlfBasis build_basis(const BasisSpec& spec) {
  std::optional<NodeSet> nodes;
  if (spec.nodes.scheme == NodeScheme::UserSupplied) {
    if (spec.nodes.values.size() != spec.N + 1)
      throw Error(ErrorKind::LengthMismatch,
                  "user nodes list " + std::to_string(spec.nodes.values.size()) +
                      " values but N = " + std::to_string(spec.N));
    nodes.emplace(spec.a, spec.b, spec.nodes.values, NodeScheme::UserSupplied);
  } else {
    nodes.emplace(generate_nodes(spec.nodes.scheme, spec.N, spec.a, spec.b));
  }
  return validate_basis(make_psi_family(spec.family, spec.N + 1), *nodes);
}

namespace {

json dimension_json(const DlfBasis& basis) {
  json j;
  j["family"] = psi_spec_to_json(basis.psi().spec());
  j["scheme"] = to_string(basis.nodes().scheme());
  const double b = basis.nodes().b();
  j["domain"] = {basis.nodes().a(), std::isfinite(b) ? json(b) : json("inf")};
  j["nodes"] = std::vector<double>(basis.nodes().values().begin(), basis.nodes().values().end());
  return j;
}

}  // namespace

json interpolant_to_json(const Interpolant& interp) {
  json j = dimension_json(interp.basis());
  j["coeffs"] = std::vector<double>(interp.coeffs().begin(), interp.coeffs().end());
  j["ordering"] = "last-fastest";
  return j;
}

json interpolant_to_json(const TensorInterpolant& interp) {
  json j;
  j["dimensions"] = json::array();
  for (const auto& b : interp.bases()) j["dimensions"].push_back(dimension_json(b));
  j["shape"] = interp.shape();
  j["coeffs"] = std::vector<double>(interp.coeffs().begin(), interp.coeffs().end());
  j["ordering"] = "last-fastest";
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("malformed JSON in '" + path + "': " + e.what());
  }
}

ProblemConfig problem_config_from_json(const json& j) {
  if (!j.is_object()) config_error("problem config must be a JSON object");
  static const std::set<std::string> known = {
      "dim",  "domains", "orders", "splits", "residual", "rhs",    "conditions", "family",
      "nodes", "N",      "linear", "exact",  "newton",   "samples", "description"};
  for (const auto& [key, v] : j.items())
    if (!known.count(key)) config_error("unknown config key '" + key + "'");
  for (const char* key : {"dim", "domains", "orders", "residual", "conditions"})
    if (!j.contains(key)) config_error(std::string("config is missing '") + key + "'");

  ProblemConfig c;
  const int dim = json_int(j["dim"], "dim");
  if (dim < 1) config_error("'dim' must be at least 1");
  const auto p = static_cast<std::size_t>(dim);

  const auto domains = per_dimension(j["domains"], p, "domains", true);
  const auto orders = per_dimension(j["orders"], p, "orders", false);
  const json splits_json = j.value("splits", json());
  c.problem.dims.resize(p);
  for (std::size_t d = 0; d < p; ++d) {
    DimensionSpec& spec = c.problem.dims[d];
    const auto dom = domains[d];
    if (!dom.is_array() || dom.size() != 2) config_error("each domain must be [a, b]");
    spec.a = json_number(dom[0], "domains");
    spec.b = json_number(dom[1], "domains");
    spec.order = json_int(orders[d], "orders");
    if (splits_json.is_null()) {
      // Default split: conditions at both ends for even orders.
      spec.initial_count = (spec.order + 1) / 2;
      spec.boundary_count = spec.order / 2;
    } else {
      const auto split = per_dimension(splits_json, p, "splits", true)[d];
      if (!split.is_array() || split.size() != 2) config_error("each split must be [v1, v2]");
      spec.initial_count = json_int(split[0], "splits");
      spec.boundary_count = json_int(split[1], "splits");
    }
  }

  c.problem.residual = json_expr(j["residual"], "residual");
  c.problem.rhs = j.contains("rhs") ? json_expr(j["rhs"], "rhs") : expr::Expr::number(0.0);
  if (j.contains("linear")) {
    if (!j["linear"].is_boolean()) config_error("'linear' must be true or false");
    c.problem.linear = j["linear"].get<bool>();
  }

  static const std::regex face_re("([ab])([0-9]*)");
  if (!j["conditions"].is_array()) config_error("'conditions' must be an array");
  for (const auto& cj : j["conditions"]) {
    if (!cj.is_object() || !cj.contains("face") || !cj.contains("expr"))
      config_error("each condition needs 'face' and 'expr'");
    ConditionSpec cond;
    const auto face = json_string(cj["face"], "face");
    std::smatch m;
    if (!std::regex_match(face, m, face_re)) config_error("condition face must look like a, b, a1 or b2");
    cond.side = m[1] == "a" ? Side::Initial : Side::Boundary;
    if (m[2].length() == 0) {
      if (p != 1) config_error("condition face '" + face + "' needs a dimension index");
      cond.dim = 0;
    } else {
      const int d = std::stoi(m[2]);
      if (d < 1 || static_cast<std::size_t>(d) > p)
        config_error("condition face '" + face + "' names a missing dimension");
      cond.dim = static_cast<std::size_t>(d - 1);
    }
    cond.order = cj.contains("order") ? json_int(cj["order"], "order") : 0;
    cond.value = json_expr(cj["expr"], "expr");
    c.problem.conditions.push_back(std::move(cond));
  }

  for (const auto& f : per_dimension(j.value("family", json("identity")), p, "family", false))
    c.families.push_back(psi_spec_from_json(f));
  const json nodes_json = j.value("nodes", json("cgl"));
  for (const auto& n : (nodes_json.is_array() ? per_dimension(nodes_json, p, "nodes", false)
                                              : std::vector<json>(p, nodes_json)))
    c.nodes.push_back(node_spec_from_json(n));
  for (const auto& n : per_dimension(j.value("N", json(16)), p, "N", false)) {
    const int N = json_int(n, "N");
    if (N < 1) config_error("'N' must be at least 1");
    c.N.push_back(static_cast<std::size_t>(N));
  }
  if (j.contains("exact")) c.exact = json_expr(j["exact"], "exact");
  if (j.contains("samples")) {
    const int s = json_int(j["samples"], "samples");
    if (s < 2) config_error("'samples' must be at least 2");
    c.samples = static_cast<std::size_t>(s);
  }
  if (j.contains("newton")) {
    const json& nj = j["newton"];
    if (!nj.is_object()) config_error("'newton' must be an object");
    for (const auto& [key, v] : nj.items()) {
      if (key == "tolerance") c.options.tolerance = json_number(v, key);
      else if (key == "max_iterations") c.options.max_iterations = json_int(v, key);
      else if (key == "max_halvings") c.options.max_halvings = json_int(v, key);
      else if (key == "jacobian_step") c.options.jacobian_step = json_number(v, key);
      else if (key == "initial_guess") c.initial_guess = json_expr(v, key);
      else config_error("unknown newton key '" + key + "'");
    }
  }
  return c;
}

ProblemConfig load_problem_config(const std::string& path) {
  return problem_config_from_json(load_json_file(path));
}

std::vector<DlfBasis> build_problem_bases(const ProblemConfig& config,
                                          const std::vector<std::size_t>& N) {
  const std::size_t p = config.problem.dims.size();
  if (N.size() != p && N.size() != 1)
    config_error("N lists " + std::to_string(N.size()) + " values for " + std::to_string(p) +
                 " dimensions");
  std::vector<DlfBasis> bases;
  for (std::size_t d = 0; d < p; ++d) {
    BasisSpec spec;
    spec.family = config.families[d];
    spec.nodes = config.nodes[d];
    spec.N = N.size() == 1 ? N[0] : N[d];
    spec.a = config.problem.dims[d].a;
    spec.b = config.problem.dims[d].b;
    bases.push_back(build_basis(spec));
  }
  return bases;
}

namespace {

expr::Env coordinate_env(std::span<const double> point) {
  expr::Env env;
  const std::size_t p = point.size();
  for (std::size_t d = 0; d < p; ++d) env["x" + std::to_string(d + 1)] = point[d];
  if (p == 1) env["x"] = point[0];
  if (p >= 2 && p <= 3) {
    const char* names[] = {"x", "y", "z"};
    for (std::size_t d = 0; d < p; ++d) env[names[d]] = point[d];
  }
  return env;
}

std::vector<std::vector<double>> grid_points(const std::vector<DlfBasis>& bases) {
  std::vector<std::vector<double>> pts{{}};
  for (const auto& b : bases) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : pts)
      for (double x : b.nodes().values()) {
        auto q = prefix;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace

CollocationSystem assemble_problem(const ProblemConfig& config,
                                   const std::vector<DlfBasis>& bases) {
  return config.problem.dims.size() == 1 ? assemble_collocation_1d(config.problem, bases[0])
                                         : assemble_collocation_nd(config.problem, bases);
}

SolveResult solve_problem(const ProblemConfig& config, const CollocationSystem& system) {
  SolveOptions options = config.options;
  if (config.initial_guess) {
    std::vector<double> guess;
    for (const auto& pt : grid_points(system.bases()))
      guess.push_back(expr::eval_expr(*config.initial_guess, coordinate_env(pt)));
    options.initial_guess = std::move(guess);
  }
  return solve_system(system, options);
}

std::vector<std::vector<double>> sample_grid(const ProblemConfig& config) {
  std::vector<std::vector<double>> axes;
  for (const auto& dim : config.problem.dims) {
    if (!std::isfinite(dim.b)) config_error("sample tables need a bounded domain");
    std::vector<double> axis;
    for (std::size_t k = 0; k < config.samples; ++k)
      axis.push_back(k + 1 == config.samples
                         ? dim.b
                         : dim.a + (dim.b - dim.a) * static_cast<double>(k) /
                                       static_cast<double>(config.samples - 1));
    axes.push_back(std::move(axis));
  }
  std::vector<std::vector<double>> pts{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : pts)
      for (double x : axis) {
        auto q = prefix;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

double sampled_max_error(const ProblemConfig& config, const SolveResult& result) {
  if (!config.exact) config_error("config has no 'exact' solution to compare against");
  double err = 0.0;
  for (const auto& pt : sample_grid(config)) {
    const double un = std::holds_alternative<Interpolant>(result.solution)
                          ? std::get<Interpolant>(result.solution)(pt[0])
                          : std::get<TensorInterpolant>(result.solution)(pt);
    err = std::max(err, std::abs(un - expr::eval_expr(*config.exact, coordinate_env(pt))));
  }
  return err;
}

}  // namespace dlf
