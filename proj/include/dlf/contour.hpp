#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "dlf/basis.hpp"
#include "dlf/expr.hpp"

namespace dlf {

using cplx = std::complex<double>;

/// Positively oriented circle z(θ) = center + radius e^{iθ}, sampled at M
/// equispaced panel points.
struct Contour {
  cplx center = 0.0;
  double radius = 2.0;
  int panels = 256;
};

/// Function analytic on and inside the contours it is used with, except at
/// the declared poles (which must lie outside).
struct AnalyticFn {
  std::function<cplx(cplx)> eval;
  std::vector<cplx> poles;
  std::string name;

  cplx operator()(cplx z) const { return eval(z); }
};

/// Builds an AnalyticFn from an expression in x, evaluated on the principal
/// branch.
AnalyticFn analytic_from_expr(const expr::Expr& body, std::vector<cplx> poles = {});
AnalyticFn analytic_from_string(const std::string& text, std::vector<cplx> poles = {});

/// Panel points z_k, rotated by half a panel when any of them comes within
/// 1e-8 of a point in `avoid`.
std::vector<cplx> contour_points(const Contour& contour, const std::vector<double>& avoid = {});

/// (1/2πi) ∮ f(z) dz by the periodic trapezoid rule.
cplx trapezoid_contour_quad(const std::function<cplx(cplx)>& f, const Contour& contour,
                            const std::vector<double>& avoid = {});

/// Throws ContourEnclosure unless the nodes and x sit inside with clearance
/// 0.1 radius and every pole of u is outside; throws ContourIneligible for
/// families without an analytic continuation free of extra zeros inside.
void check_contour(const DlfBasis& basis, const AnalyticFn& u, double x, const Contour& contour);

/// Per-j contour integrals
///   (1/2πi) ∮ ψ_j'(t) u(t) (w(t) - w(x)) / (w(t) (ψ_j(t) - ψ_j(x))) dt.
/// Each one equals u_N(x) when ψ is homogeneous.
std::vector<cplx> contour_interpolant_terms(const DlfBasis& basis, const AnalyticFn& u, double x,
                                            const Contour& contour);

/// Average of the per-j terms: the contour form of u_N(x).
cplx contour_interpolant(const DlfBasis& basis, const AnalyticFn& u, double x,
                         const Contour& contour);

/// Averaged contour form of u_N(x) - u(x).
cplx contour_error(const DlfBasis& basis, const AnalyticFn& u, double x, const Contour& contour);

/// Single classical Hermite integral with w(t) = prod (t - x_i), also
/// returned as u_N(x) - u(x).
cplx classical_contour_error(const DlfBasis& basis, const AnalyticFn& u, double x,
                             const Contour& contour);

/// Classical Hermite form of the polynomial interpolant.
cplx classical_contour_interpolant(const DlfBasis& basis, const AnalyticFn& u, double x,
                                   const Contour& contour);

/// One row of the contour-check report.
struct ContourCheckRow {
  double x;
  double direct_un;
  double contour_un;
  double direct_err;   // u_N(x) - u(x)
  double contour_err;
  double abs_discrepancy;  // max of the two mismatches
};

ContourCheckRow contour_check_point(const DlfBasis& basis, const AnalyticFn& u, double x,
                                    const Contour& contour);

}  // namespace dlf
