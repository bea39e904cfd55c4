#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlf/contour.hpp"
#include "dlf/diffmat.hpp"
#include "dlf/error.hpp"
#include "dlf/interp.hpp"
#include "dlf/io.hpp"
#include "dlf/solver.hpp"

namespace py = pybind11;

namespace {

dlf::DlfBasis make_basis(const std::string& family, std::size_t N, double a, double b,
                         const std::string& nodes) {
  dlf::BasisSpec spec;
  spec.family = dlf::psi_spec_from_json(dlf::json::parse(family));
  spec.nodes = dlf::node_spec_from_json(dlf::json::parse(nodes));
  spec.N = N;
  spec.a = a;
  spec.b = b;
  if (spec.nodes.scheme == dlf::NodeScheme::UserSupplied) spec.N = spec.nodes.values.size() - 1;
  return dlf::build_basis(spec);
}

py::dict solve(const std::string& config_json, std::vector<std::size_t> N) {
  const dlf::ProblemConfig config = dlf::problem_config_from_json(dlf::json::parse(config_json));
  if (N.empty()) N = config.N;
  const auto bases = dlf::build_problem_bases(config, N);
  const dlf::CollocationSystem system = dlf::assemble_problem(config, bases);
  const dlf::SolveResult r = dlf::solve_problem(config, system);
  py::dict out;
  out["values"] = r.values;
  out["linear"] = r.report.linear;
  out["iterations"] = r.report.iterations;
  out["residual_norm"] = r.report.residual_norm;
  out["interior_rows"] = system.interior_rows();
  out["unknowns"] = system.unknowns();
  out["overlapping_points"] = system.overlap_count();
  std::vector<std::vector<double>> nodes;
  for (const auto& b : bases) nodes.emplace_back(b.nodes().values().begin(), b.nodes().values().end());
  out["nodes"] = nodes;
  if (config.exact) out["max_error"] = dlf::sampled_max_error(config, r);
  out["solution_json"] = std::visit([](const auto& s) { return dlf::interpolant_to_json(s).dump(); },
                                    r.solution);
  return out;
}

}  // namespace

PYBIND11_MODULE(_dlf, m) {
  m.doc() = "Developed Lagrange functions: bases, operational matrices, collocation, contours.";

  static PyObject* dlf_error = PyErr_NewException("_dlf.DlfError", PyExc_RuntimeError, nullptr);
  m.attr("DlfError") = py::handle(dlf_error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dlf::Error& e) {
      PyErr_SetString(dlf_error, (std::string(dlf::to_string(e.kind())) + ": " + e.what()).c_str());
    } catch (const dlf::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<dlf::DlfBasis>(m, "Basis")
      .def(py::init(&make_basis), py::arg("family"), py::arg("N") = 8, py::arg("a") = -1.0,
           py::arg("b") = 1.0, py::arg("nodes") = "\"cgl\"")
      .def_property_readonly("size", &dlf::DlfBasis::size)
      .def_property_readonly("nodes",
                             [](const dlf::DlfBasis& b) {
                               return std::vector<double>(b.nodes().values().begin(),
                                                          b.nodes().values().end());
                             })
      .def("eval", [](const dlf::DlfBasis& b, std::size_t j, double x) { return dlf::dlf_eval(b, j, x); })
      .def("weight", [](const dlf::DlfBasis& b, double x) { return dlf::weight_eval(b, x); })
      .def("limit", [](const dlf::DlfBasis& b, std::size_t j) { return dlf::dlf_limit(b, j); })
      .def("d1", [](const dlf::DlfBasis& b) { return dlf::d1_matrix(b).entries; })
      .def("dm", [](const dlf::DlfBasis& b, int m) { return dlf::dm_matrix(b, m).entries; })
      .def("classical_power",
           [](const dlf::DlfBasis& b, int m) { return dlf::dm_power_classical(b, m).entries; })
      .def("oracle",
           [](const dlf::DlfBasis& b, int m, double step) { return dlf::dm_oracle_fd(b, m, step).entries; },
           py::arg("m"), py::arg("step") = 1e-4);

  py::class_<dlf::Interpolant>(m, "Interpolant")
      .def("__call__", [](const dlf::Interpolant& u, double x) { return u(x); })
      .def("to_json", [](const dlf::Interpolant& u) { return dlf::interpolant_to_json(u).dump(); });

  m.def("interpolate",
        [](const dlf::DlfBasis& b, const std::vector<double>& samples) {
          return dlf::interpolate_1d(b, samples);
        });
  m.def("kron", [](const std::vector<double>& a, const std::vector<double>& b) {
    return dlf::kron_vec(a, b);
  });
  m.def("solve", &solve, py::arg("config_json"), py::arg("N") = std::vector<std::size_t>{});
  m.def(
      "contour_check",
      [](const dlf::DlfBasis& b, const std::string& fn, double x, std::complex<double> center,
         double radius, int panels) {
        const dlf::ContourCheckRow r =
            dlf::contour_check_point(b, dlf::analytic_from_string(fn), x, {center, radius, panels});
        py::dict out;
        out["direct_un"] = r.direct_un;
        out["contour_un"] = r.contour_un;
        out["direct_err"] = r.direct_err;
        out["contour_err"] = r.contour_err;
        out["abs_discrepancy"] = r.abs_discrepancy;
        return out;
      },
      py::arg("basis"), py::arg("fn"), py::arg("x"), py::arg("center") = 0.0,
      py::arg("radius") = 2.0, py::arg("panels") = 256);
}
