#include "dlf/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dlf/contour.hpp"
#include "dlf/diffmat.hpp"
#include "dlf/error.hpp"
#include "dlf/io.hpp"

namespace dlf {

namespace {

namespace fs = std::filesystem;

/// Flat flags that mirror the family / nodes / N / domain config keys.
struct BasisFlags {
  std::string config;
  std::string family;
  std::optional<double> delta, length, rate, frequency;
  std::vector<double> lengths, rates, frequencies;
  std::optional<std::string> variant;
  std::optional<int> split;
  std::string psi_expr;
  std::optional<int> psi_order;
  std::string scheme;
  std::vector<double> nodes;
  std::optional<int> N;
  std::optional<double> a, b;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON file with family, nodes, N and domain keys");
    app->add_option("--family", family, "identity, fractional, generalized, rational, exponential, "
                                        "fourier-sin, fourier-cos, mixed");
    app->add_option("--delta", delta, "fractional exponent");
    app->add_option("--length", length, "rational L");
    app->add_option("--lengths", lengths, "rational L_i per index")->delimiter(',');
    app->add_option("--variant", variant, "rational form: ratio or shifted");
    app->add_option("--rate", rate, "exponential rate");
    app->add_option("--rates", rates, "exponential rate per index")->delimiter(',');
    app->add_option("--frequency", frequency, "fourier frequency");
    app->add_option("--frequencies", frequencies, "fourier frequency per index")->delimiter(',');
    app->add_option("--split", split, "mixed: last exponential index");
    app->add_option("--psi-expr", psi_expr, "generalized psi(x) expression");
    app->add_option("--psi-order", psi_order, "derivative orders prepared for --psi-expr");
    app->add_option("--scheme", scheme, "cgl, equispaced or user");
    app->add_option("--nodes", nodes, "user nodes, comma separated")->delimiter(',');
    app->add_option("--N", N, "polynomial degree (N + 1 nodes)");
    app->add_option("--a", a, "left endpoint");
    app->add_option("--b", b, "right endpoint");
  }

  BasisSpec spec() const {
    BasisSpec s;
    if (!config.empty()) {
      const json j = load_json_file(config);
      if (j.contains("family")) s.family = psi_spec_from_json(j["family"]);
      if (j.contains("nodes")) s.nodes = node_spec_from_json(j["nodes"]);
      if (j.contains("N")) s.N = j["N"].get<std::size_t>();
      if (j.contains("domain")) {
        s.a = json_number(j["domain"].at(0), "domain");
        s.b = json_number(j["domain"].at(1), "domain");
      }
    }
    if (!family.empty()) s.family.kind = psi_kind_from_string(family);
    if (delta) s.family.delta = *delta;
    if (length) s.family.length = *length;
    if (!lengths.empty()) s.family.lengths = lengths;
    if (variant) s.family = psi_spec_from_json(with_variant(s.family, *variant));
    if (rate) s.family.rate = *rate;
    if (!rates.empty()) s.family.rates = rates;
    if (frequency) s.family.frequency = *frequency;
    if (!frequencies.empty()) s.family.frequencies = frequencies;
    if (split) {
      if (*split < 0) throw Error(ErrorKind::InvalidParameter, "--split must be non-negative");
      s.family.split = static_cast<std::size_t>(*split);
    }
    if (!psi_expr.empty()) {
      s.family.expression = psi_expr;
      if (family.empty()) s.family.kind = PsiKind::Generalized;
    }
    if (psi_order) s.family.expression_order = *psi_order;
    if (!scheme.empty()) s.nodes.scheme = node_scheme_from_string(scheme);
    if (!nodes.empty()) {
      s.nodes.scheme = NodeScheme::UserSupplied;
      s.nodes.values = nodes;
    }
    if (N) {
      if (*N < 1) throw Error(ErrorKind::InvalidParameter, "--N must be at least 1");
      s.N = static_cast<std::size_t>(*N);
    } else if (s.nodes.scheme == NodeScheme::UserSupplied && !s.nodes.values.empty()) {
      s.N = s.nodes.values.size() - 1;
    }
    if (a) s.a = *a;
    if (b) s.b = *b;
    return s;
  }

 private:
  static json with_variant(const PsiSpec& spec, const std::string& v) {
    json j = psi_spec_to_json(spec);
    j["variant"] = v;
    // Keep fields the kind-specific serializer drops.
    j["length"] = spec.length;
    if (!spec.lengths.empty()) j["lengths"] = spec.lengths;
    return j;
  }
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  f << text;
}

std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ',';
    s += format_double(v);
  }
  return s + '\n';
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message,
                 int code) {
  json j{{"error", kind}, {"message", message}, {"exit_code", code}};
  err << j.dump() << '\n';
  return code;
}

// ---- subcommands ----

void run_basis(const BasisFlags& flags, const std::string& out_path, std::ostream& out) {
  const DlfBasis basis = build_basis(flags.spec());
  std::string csv = "i,x,psi_i(x_i),mu_i\n";
  for (std::size_t i = 0; i < basis.size(); ++i)
    csv += std::to_string(i) + ',' + format_double(basis.node(i)) + ',' +
           format_double(basis.anchor(i)) + ',' + format_double(basis.mu()[i]) + '\n';
  write_text(out_path, csv, out);
}

void run_diffmat(const BasisFlags& flags, int order, const std::string& method,
                 const std::string& out_path, std::ostream& out) {
  const DlfBasis basis = build_basis(flags.spec());
  if (order < 1) throw Error(ErrorKind::InvalidParameter, "--order must be at least 1");
  DiffMatrix d;
  if (method == "closed-form" || method == "recurrence") d = dm_matrix(basis, order);
  else if (method == "classical") d = dm_power_classical(basis, order);
  else if (method == "fd") d = dm_oracle_fd(basis, order);
  else throw Error(ErrorKind::InvalidParameter, "unknown --method '" + method + "'");
  write_text(out_path, to_csv(d), out);
}

void run_interp(const BasisFlags& flags, const std::string& fn, const std::vector<double>& at,
                const std::string& out_path, const std::string& samples_path,
                std::ostream& out) {
  const DlfBasis basis = build_basis(flags.spec());
  const expr::Expr u = expr::parse_expr(fn);
  std::vector<double> values;
  for (double x : basis.nodes().values()) values.push_back(expr::eval_expr(u, expr::Env{{"x", x}}));
  const Interpolant interp(basis, values);
  if (!samples_path.empty()) {
    std::string csv = "x,u_N,u,error\n";
    for (double x : at) {
      const double un = interp(x);
      const double ux = expr::eval_expr(u, expr::Env{{"x", x}});
      csv += csv_row({x, un, ux, un - ux});
    }
    write_text(samples_path, csv, out);
  }
  write_text(out_path, interpolant_to_json(interp).dump(2) + '\n', out);
}

ProblemConfig load_with_overrides(const std::string& config_path, const std::vector<int>& N,
                                  const std::string& family, const std::string& scheme,
                                  std::optional<double> tolerance) {
  ProblemConfig c = load_problem_config(config_path);
  if (!N.empty()) {
    c.N.clear();
    for (int n : N) {
      if (n < 1) throw Error(ErrorKind::InvalidParameter, "--N entries must be at least 1");
      c.N.push_back(static_cast<std::size_t>(n));
    }
  }
  if (!family.empty())
    for (auto& f : c.families) f = psi_spec_from_json(json(family));
  if (!scheme.empty())
    for (auto& n : c.nodes) n = node_spec_from_json(json(scheme));
  if (tolerance) c.options.tolerance = *tolerance;
  return c;
}

void run_solve(const ProblemConfig& config, const std::string& out_dir, std::ostream& out) {
  if (out_dir.empty()) throw Error(ErrorKind::ConfigError, "solve needs --out <directory>");
  const auto bases = build_problem_bases(config, config.N);
  const CollocationSystem system = assemble_problem(config, bases);
  const SolveResult result = solve_problem(config, system);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  json sol = std::visit([](const auto& s) { return interpolant_to_json(s); }, result.solution);
  write_text((dir / "solution.json").string(), sol.dump(2) + '\n', out);

  const std::size_t p = system.dimension();
  std::string csv;
  for (std::size_t d = 0; d < p; ++d) csv += (p == 1 ? std::string("x") : "x" + std::to_string(d + 1)) + ',';
  csv += config.exact ? "u_N,exact,error\n" : "u_N\n";
  const bool bounded = std::all_of(config.problem.dims.begin(), config.problem.dims.end(),
                                   [](const DimensionSpec& d) { return std::isfinite(d.b); });
  if (bounded) {
    for (const auto& pt : sample_grid(config)) {
      const double un = p == 1 ? std::get<Interpolant>(result.solution)(pt[0])
                               : std::get<TensorInterpolant>(result.solution)(pt);
      for (double x : pt) csv += format_double(x) + ',';
      csv += format_double(un);
      if (config.exact) {
        expr::Env env;
        for (std::size_t d = 0; d < p; ++d) env["x" + std::to_string(d + 1)] = pt[d];
        const char* alias[] = {"x", "y", "z"};
        if (p <= 3)
          for (std::size_t d = 0; d < p; ++d) env[alias[d]] = pt[d];
        const double ex = expr::eval_expr(*config.exact, env);
        csv += ',' + format_double(ex) + ',' + format_double(un - ex);
      }
      csv += '\n';
    }
  }
  write_text((dir / "samples.csv").string(), csv, out);

  std::size_t conditions = system.unknowns() - system.interior_rows();
  json report{{"linear", result.report.linear},
              {"iterations", result.report.iterations},
              {"unknowns", system.unknowns()},
              {"interior_rows", system.interior_rows()},
              {"condition_rows", conditions},
              {"overlapping_points", system.overlap_count()},
              {"residual_norm", result.report.residual_norm},
              {"interior_residual", result.report.interior_residual},
              {"condition_residual", result.report.condition_residual},
              {"condition_estimate", result.report.condition_estimate}};
  if (config.exact && bounded) report["max_error"] = sampled_max_error(config, result);
  write_text((dir / "report.json").string(), report.dump(2) + '\n', out);
  out << report.dump() << '\n';
}

void run_converge(const ProblemConfig& config, const std::vector<int>& N_list, bool timing,
                  const std::string& out_path, std::ostream& out) {
  if (!config.exact) throw Error(ErrorKind::ConfigError, "converge needs an 'exact' solution");
  std::vector<std::size_t> Ns;
  if (N_list.empty()) Ns = {config.N.front()};
  for (int n : N_list) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "--N entries must be at least 1");
    if (!Ns.empty() && static_cast<std::size_t>(n) <= Ns.back())
      throw Error(ErrorKind::InvalidParameter, "--N list must be strictly increasing");
    Ns.push_back(static_cast<std::size_t>(n));
  }
  std::string csv = "N,max_error,assemble_ms,solve_ms\n";
  for (std::size_t N : Ns) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto bases = build_problem_bases(config, {N});
    const CollocationSystem system = assemble_problem(config, bases);
    const double assemble_ms = elapsed_ms(t0);
    const auto t1 = std::chrono::steady_clock::now();
    const SolveResult result = solve_problem(config, system);
    const double solve_ms = elapsed_ms(t1);
    csv += std::to_string(N) + ',' + format_double(sampled_max_error(config, result)) + ',' +
           format_double(timing ? assemble_ms : 0.0) + ',' + format_double(timing ? solve_ms : 0.0) +
           '\n';
  }
  write_text(out_path, csv, out);
}

void run_contour_check(const BasisFlags& flags, const std::string& fn, std::vector<double> at,
                       int points, std::optional<double> center, std::optional<double> radius,
                       int panels, const std::string& out_path, std::ostream& out) {
  const DlfBasis basis = build_basis(flags.spec());
  const AnalyticFn u = analytic_from_string(fn);
  const double a = basis.nodes().a();
  const double b = basis.nodes().b();
  if (!std::isfinite(b))
    throw Error(ErrorKind::ContourEnclosure, "contour-check needs a bounded domain");
  Contour c;
  c.center = center.value_or(0.5 * (a + b));
  c.radius = radius.value_or(b - a);
  c.panels = panels;
  if (at.empty()) {
    if (points < 1) throw Error(ErrorKind::InvalidParameter, "--points must be at least 1");
    for (int k = 0; k < points; ++k) at.push_back(a + (b - a) * (k + 0.5) / points);
  }
  std::string csv = "x,direct_uN,contour_uN,direct_err,contour_err,abs_discrepancy\n";
  for (double x : at) {
    const ContourCheckRow r = contour_check_point(basis, u, x, c);
    csv += csv_row({r.x, r.direct_un, r.contour_un, r.direct_err, r.contour_err, r.abs_discrepancy});
  }
  write_text(out_path, csv, out);
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Developed Lagrange Function toolkit", "dlf"};
  app.require_subcommand(1);

  BasisFlags basis_flags, diff_flags, interp_flags, contour_flags;
  std::string out_path, samples_path, method = "closed-form", fn, config_path, family, scheme;
  int order = 1, points = 20, panels = 256;
  std::vector<double> at;
  std::vector<int> N_list;
  std::optional<double> tolerance, center, radius;
  bool no_timing = false;

  auto* basis = app.add_subcommand("basis", "validate a family/node pair and dump the nodes");
  basis_flags.attach(basis);
  basis->add_option("--out", out_path, "CSV output (default stdout)");

  auto* diffmat = app.add_subcommand("diffmat", "write a derivative operational matrix as CSV");
  diff_flags.attach(diffmat);
  diffmat->add_option("--order", order, "derivative order m");
  diffmat->add_option("--method", method, "closed-form, classical or fd");
  diffmat->add_option("--out", out_path, "CSV output (default stdout)");

  auto* interp = app.add_subcommand("interp", "interpolate an expression and write JSON");
  interp_flags.attach(interp);
  interp->add_option("--fn", fn, "u(x) expression")->required();
  interp->add_option("--at", at, "evaluation points for the sample table")->delimiter(',');
  interp->add_option("--samples-out", samples_path, "CSV sample table at --at points");
  interp->add_option("--out", out_path, "JSON output (default stdout)");

  auto add_problem_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "problem config JSON")->required();
    sub->add_option("--N", N_list, "N (or one per dimension / sweep list)")->delimiter(',');
    sub->add_option("--family", family, "override the family kind in every dimension");
    sub->add_option("--scheme", scheme, "override the node scheme in every dimension");
    sub->add_option("--tolerance", tolerance, "Newton residual tolerance");
  };
  auto* solve = app.add_subcommand("solve", "solve a collocation problem");
  add_problem_flags(solve);
  solve->add_option("--out", out_path, "output directory")->required();

  auto* converge = app.add_subcommand("converge", "run an N sweep against the exact solution");
  add_problem_flags(converge);
  converge->add_option("--out", out_path, "CSV output (default stdout)");
  converge->add_flag("--no-timing", no_timing, "write 0 in the timing columns");

  auto* contour = app.add_subcommand("contour-check", "compare contour and direct evaluation");
  contour_flags.attach(contour);
  contour->add_option("--fn", fn, "analytic u(x) expression")->required();
  contour->add_option("--at", at, "evaluation points")->delimiter(',');
  contour->add_option("--points", points, "equispaced evaluation points when --at is absent");
  contour->add_option("--center", center, "circle center (real, default domain midpoint)");
  contour->add_option("--radius", radius, "circle radius (default b - a)");
  contour->add_option("--panels", panels, "trapezoid panels M");
  contour->add_option("--out", out_path, "CSV output (default stdout)");

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1]))
    return report_error(err, "usage", std::string("unknown command '") + argv[1] + "'", 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(err, "usage", e.what(), 1);
  }

  try {
    if (basis->parsed()) run_basis(basis_flags, out_path, out);
    else if (diffmat->parsed()) run_diffmat(diff_flags, order, method, out_path, out);
    else if (interp->parsed()) run_interp(interp_flags, fn, at, out_path, samples_path, out);
    else if (solve->parsed())
      run_solve(load_with_overrides(config_path, N_list, family, scheme, tolerance), out_path, out);
    else if (converge->parsed())
      run_converge(load_with_overrides(config_path, {}, family, scheme, tolerance), N_list,
                   !no_timing, out_path, out);
    else if (contour->parsed())
      run_contour_check(contour_flags, fn, at, points, center, radius, panels, out_path, out);
  } catch (const Error& e) {
    return report_error(err, to_string(e.kind()), e.what(), is_numerical(e.kind()) ? 2 : 1);
  } catch (const json::exception& e) {
    return report_error(err, to_string(ErrorKind::ConfigError), e.what(), 1);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, to_string(ErrorKind::ConfigError), e.what(), 1);
  }
  return 0;
}

}  // namespace dlf
