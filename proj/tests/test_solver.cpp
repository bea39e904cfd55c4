#include <cmath>
#include <numbers>

#include "dlf/io.hpp"
#include "dlf/solver.hpp"
#include "helpers.hpp"

using namespace dlf;
using dlf::testing::make_basis;
using dlf::testing::spec_of;

namespace {

const double kPi = std::numbers::pi;

ConditionSpec cond(std::size_t dim, Side side, int order, const std::string& value) {
  return {dim, side, order, expr::parse_expr(value)};
}

CollocationProblem sine_bvp() {
  CollocationProblem p;
  p.dims = {{0, 1, 2, 1, 1}};
  p.residual = expr::parse_expr("d2u");
  p.rhs = expr::parse_expr("-pi^2*sin(pi*x)");
  p.conditions = {cond(0, Side::Initial, 0, "0"), cond(0, Side::Boundary, 0, "0")};
  return p;
}

double max_error_1d(const SolveResult& r, double a, double b, int samples,
                    const std::function<double(double)>& exact) {
  const auto& un = std::get<Interpolant>(r.solution);
  double err = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = a + (b - a) * k / (samples - 1);
    err = std::max(err, std::abs(un(x) - exact(x)));
  }
  return err;
}

/// R[s] for a residual over u-symbols, built symbolically.
expr::Expr manufactured_rhs(const CollocationProblem& p, const expr::Expr& s) {
  const std::size_t dim = p.dims.size();
  std::unordered_map<std::string, expr::Expr> with;
  const std::vector<std::string> coords =
      dim == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y", "z"};
  auto symbol_value = [&](const std::vector<int>& orders) {
    expr::Expr e = s;
    for (std::size_t d = 0; d < dim; ++d)
      if (orders[d] > 0) e = expr::diff_expr(e, coords[d], orders[d]);
    return e;
  };
  for (const auto& name : p.residual.variables()) {
    if (name == "u") with[name] = s;
    else if (name == "du") with[name] = symbol_value({1});
    else if (name.size() > 2 && name[0] == 'd' && name.back() == 'u')
      with[name] = symbol_value({std::stoi(name.substr(1, name.size() - 2))});
    else if (name.rfind("u_{", 0) == 0) {
      std::vector<int> orders;
      std::stringstream body(name.substr(3, name.size() - 4));
      std::string item;
      while (std::getline(body, item, ',')) orders.push_back(std::stoi(item));
      with[name] = symbol_value(orders);
    }
  }
  return expr::substitute(p.residual, with);
}

/// Replaces the condition data with derivatives of s.
void manufactured_conditions(CollocationProblem& p, const expr::Expr& s) {
  const std::size_t dim = p.dims.size();
  const std::vector<std::string> coords =
      dim == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y", "z"};
  for (auto& c : p.conditions)
    c.value = c.order == 0 ? s : expr::diff_expr(s, coords[c.dim], c.order);
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("first-order example: u' - 1 = 0, u(0) = 0") {
    CollocationProblem p;
    p.dims = {{0, 1, 1, 1, 0}};
    p.residual = expr::parse_expr("du - 1");
    p.rhs = expr::parse_expr("0");
    p.conditions = {cond(0, Side::Initial, 0, "0")};
    const DlfBasis b = validate_basis(make_psi_family(spec_of(PsiKind::Identity), 2),
                                      NodeSet(0, 1, {0.0, 1.0}));
    const SolveResult r = solve_system(assemble_collocation_1d(p, b));
    CHECK(std::abs(r.values[0]) < 1e-15);
    CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("1D row accounting") {
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 5, 0, 1);
    const CollocationSystem s = assemble_collocation_1d(sine_bvp(), b);
    CHECK(s.unknowns() == 6);
    CHECK(s.interior_rows() == 4);
    const auto& roles = s.roles();
    CHECK(std::count(roles.begin(), roles.end(), RowRole::Interior) == 4);
    CHECK(roles[4] == RowRole::Initial);
    CHECK(roles[5] == RowRole::Boundary);
    CHECK(s.row_points() == std::vector<std::size_t>{1, 2, 3, 4, 0, 5});
  }

  TEST_CASE("syntactic nonlinearity detection and override") {
    CollocationProblem p;
    p.dims = {{0, 1, 1, 1, 0}};
    p.residual = expr::parse_expr("du*u - x");
    p.conditions = {cond(0, Side::Initial, 0, "1")};
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 6, 0, 1);
    CHECK_FALSE(assemble_collocation_1d(p, b).linear());
    p.residual = expr::parse_expr("du - x*u");
    CHECK(assemble_collocation_1d(p, b).linear());
    p.linear = false;
    CHECK_FALSE(assemble_collocation_1d(p, b).linear());
  }

  TEST_CASE("sine BVP at N = 16") {
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 16, 0, 1);
    const SolveResult r = solve_system(assemble_collocation_1d(sine_bvp(), b));
    CHECK(max_error_1d(r, 0, 1, 500, [](double x) { return std::sin(kPi * x); }) < 1e-9);
    CHECK(r.report.linear);
    CHECK(r.report.interior_residual <= 1e-10 * (1 + kPi * kPi));
    CHECK(r.report.condition_residual <= 1e-10);
  }

  TEST_CASE("spectral convergence is monotone") {
    double previous = 1e300;
    for (std::size_t N : {8u, 12u, 16u}) {
      const DlfBasis b = make_basis(spec_of(PsiKind::Identity), N, 0, 1);
      const SolveResult r = solve_system(assemble_collocation_1d(sine_bvp(), b));
      const double err = max_error_1d(r, 0, 1, 501, [](double x) { return std::sin(kPi * x); });
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 1e-8);
  }

  TEST_CASE("u' = u, u(0) = 1 at N = 10") {
    CollocationProblem p;
    p.dims = {{0, 1, 1, 1, 0}};
    p.residual = expr::parse_expr("du - u");
    p.conditions = {cond(0, Side::Initial, 0, "1")};
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 10, 0, 1);
    const SolveResult r = solve_system(assemble_collocation_1d(p, b));
    CHECK(max_error_1d(r, 0, 1, 500, [](double x) { return std::exp(x); }) < 1e-9);
  }

  TEST_CASE("derivative conditions use the endpoint derivative rows") {
    // u'' = -u with u(0) = 0, u'(0) = 1 is sin(x); both conditions at a.
    CollocationProblem p;
    p.dims = {{0, 2, 2, 2, 0}};
    p.residual = expr::parse_expr("d2u + u");
    p.conditions = {cond(0, Side::Initial, 0, "0"), cond(0, Side::Initial, 1, "1")};
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 16, 0, 2);
    const CollocationSystem s = assemble_collocation_1d(p, b);
    CHECK(s.row_points() == std::vector<std::size_t>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
                                                     16, 0, 1});
    const SolveResult r = solve_system(s);
    CHECK(max_error_1d(r, 0, 2, 300, [](double x) { return std::sin(x); }) < 1e-10);
  }

  TEST_CASE("Newton on u' = u^2") {
    CollocationProblem p;
    p.dims = {{0, 0.5, 1, 1, 0}};
    p.residual = expr::parse_expr("du - u^2");
    p.conditions = {cond(0, Side::Initial, 0, "1")};
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 12, 0, 0.5);
    const SolveResult r = solve_system(assemble_collocation_1d(p, b));
    CHECK_FALSE(r.report.linear);
    CHECK(r.report.iterations <= 20);
    CHECK(r.report.residual_norm <= 1e-12);
    CHECK(max_error_1d(r, 0, 0.5, 200, [](double x) { return 1 / (1 - x); }) < 1e-7);

    SolveOptions few;
    few.max_iterations = 1;
    CHECK_ERROR_KIND(solve_system(assemble_collocation_1d(p, b), few), ErrorKind::NewtonDivergence);
    few.max_iterations = 50;
    few.initial_guess = std::vector<double>(3, 0.0);
    CHECK_ERROR_KIND(solve_system(assemble_collocation_1d(p, b), few), ErrorKind::LengthMismatch);
  }

  TEST_CASE("singular collocation matrix") {
    CollocationProblem p = sine_bvp();
    p.residual = expr::parse_expr("0*d2u");
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 8, 0, 1);
    try {
      solve_system(assemble_collocation_1d(p, b));
      FAIL("expected singular-matrix");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SingularMatrix);
      CHECK(std::string(e.what()).find("condition estimate") != std::string::npos);
    }
  }

  TEST_CASE("assembly errors") {
    const DlfBasis b8 = make_basis(spec_of(PsiKind::Identity), 8, 0, 1);
    CollocationProblem p = sine_bvp();
    CHECK_ERROR_KIND(assemble_collocation_1d(p, make_basis(spec_of(PsiKind::Identity), 1, 0, 1)),
                     ErrorKind::AssemblyError);
    p.residual = expr::parse_expr("d3u");
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
    p.residual = expr::parse_expr("d2u + q");
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
    p = sine_bvp();
    p.conditions.pop_back();
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
    p = sine_bvp();
    p.conditions.push_back(cond(0, Side::Initial, 0, "1"));
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
    p = sine_bvp();
    p.conditions[0] = cond(0, Side::Initial, 1, "0");
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
    p = sine_bvp();
    p.dims[0].initial_count = 2;
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
    p = sine_bvp();
    const DlfBasis off = validate_basis(make_psi_family(spec_of(PsiKind::Identity), 4),
                                        NodeSet(0, 1, {0.1, 0.4, 0.7, 1.0}));
    CHECK_ERROR_KIND(assemble_collocation_1d(p, off), ErrorKind::AssemblyError);
    p.conditions[1].value = expr::parse_expr("u");
    CHECK_ERROR_KIND(assemble_collocation_1d(p, b8), ErrorKind::AssemblyError);
  }

  TEST_CASE("2D Poisson at N = 12") {
    CollocationProblem p;
    p.dims = {{0, 1, 2, 1, 1}, {0, 1, 2, 1, 1}};
    p.residual = expr::parse_expr("u_{2,0} + u_{0,2}");
    p.rhs = expr::parse_expr("-2*pi^2*sin(pi*x)*sin(pi*y)");
    for (std::size_t d = 0; d < 2; ++d)
      for (Side s : {Side::Initial, Side::Boundary}) p.conditions.push_back(cond(d, s, 0, "0"));
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 12, 0, 1);
    const CollocationSystem sys = assemble_collocation_nd(p, {b, b});
    CHECK(sys.unknowns() == 169);
    CHECK(sys.interior_rows() == 121);
    CHECK(sys.overlap_count() == 4);
    const SolveResult r = solve_system(sys);
    double err = 0.0;
    for (std::size_t i = 0; i <= 12; ++i)
      for (std::size_t j = 0; j <= 12; ++j)
        err = std::max(err, std::abs(r.values[i * 13 + j] -
                                     std::sin(kPi * b.node(i)) * std::sin(kPi * b.node(j))));
    CHECK(err < 1e-7);
  }

  TEST_CASE("2D row accounting at N = 3") {
    CollocationProblem p;
    p.dims = {{0, 1, 2, 1, 1}, {0, 1, 2, 1, 1}};
    p.residual = expr::parse_expr("u_{2,0} + u_{0,2}");
    for (std::size_t d = 0; d < 2; ++d)
      for (Side s : {Side::Initial, Side::Boundary}) p.conditions.push_back(cond(d, s, 0, "0"));
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 3, 0, 1);
    const CollocationSystem sys = assemble_collocation_nd(p, {b, b});
    CHECK(sys.interior_rows() == 4);
    CHECK(sys.unknowns() == 16);
    CHECK(sys.roles().size() == 16);
    CHECK_ERROR_KIND(assemble_collocation_nd(p, {b}), ErrorKind::AssemblyError);
  }

  TEST_CASE("polynomial solution x^2 y is reproduced") {
    CollocationProblem p;
    p.dims = {{0, 1, 2, 1, 1}, {0, 2, 2, 1, 1}};
    p.residual = expr::parse_expr("u_{2,0} + u_{0,2} + x*u_{1,0}");
    p.rhs = expr::parse_expr("2*y + 2*x^2*y");
    p.conditions = {cond(0, Side::Initial, 0, "0"), cond(0, Side::Boundary, 0, "y"),
                    cond(1, Side::Initial, 0, "0"), cond(1, Side::Boundary, 0, "2*x^2")};
    const DlfBasis bx = make_basis(spec_of(PsiKind::Identity), 4, 0, 1);
    const DlfBasis by = make_basis(spec_of(PsiKind::Identity), 3, 0, 2);
    const SolveResult r = solve_system(assemble_collocation_nd(p, {bx, by}));
    const auto& t = std::get<TensorInterpolant>(r.solution);
    for (double x : testing::uniform_points(10, 0, 1, 1))
      for (double y : testing::uniform_points(10, 0, 2, 2))
        CHECK(std::abs(t(std::vector<double>{x, y}) - x * x * y) < 1e-10);
  }

  TEST_CASE("manufactured solutions for the shipped linear examples") {
    const std::string dir = DLF_CONFIG_DIR;
    struct Case {
      std::string file;
      std::string target;
    };
    for (const Case& c : {Case{"sine_bvp.json", "cos(2*x) + x^3"},
                          Case{"poisson2d.json", "exp(x)*sin(2*y) + x*y^2"},
                          Case{"neumann_exp.json", "exp(-x)*(1 + x^2)"}}) {
      ProblemConfig config = load_problem_config(dir + "/" + c.file);
      const expr::Expr s = expr::parse_expr(c.target);
      config.problem.rhs = manufactured_rhs(config.problem, s);
      manufactured_conditions(config.problem, s);
      config.exact = s;
      const std::vector<std::size_t> N(config.problem.dims.size(), 16);
      const auto bases = build_problem_bases(config, N);
      const CollocationSystem sys = assemble_problem(config, bases);
      REQUIRE(sys.linear());
      const SolveResult r = solve_problem(config, sys);
      CHECK_MESSAGE(sampled_max_error(config, r) < 1e-7, c.file << ": " << sampled_max_error(config, r));
      CHECK(r.report.interior_residual <= 1e-10 * (1 + sys.rhs_norm()));
      CHECK(r.report.condition_residual <= 1e-10 * std::max(1.0, sys.rhs_norm()));
    }
  }

  TEST_CASE("non-identity families in the solver") {
    // u'' - u = 0 with two initial conditions, exponential basis.
    const ProblemConfig config = load_problem_config(std::string(DLF_CONFIG_DIR) + "/neumann_exp.json");
    const auto bases = build_problem_bases(config, config.N);
    const SolveResult r = solve_problem(config, assemble_problem(config, bases));
    CHECK(sampled_max_error(config, r) < 1e-10);
  }
}
