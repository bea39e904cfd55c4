#include "dlf/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dlf/error.hpp"
#include "dlf/interp.hpp"

namespace dlf {

namespace {

constexpr double kClearance = 0.1;
constexpr double kNodeAvoidance = 1e-8;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

void check_parameters(const Contour& c) {
  if (!(c.radius > 0.0) || !std::isfinite(c.radius))
    throw Error(ErrorKind::InvalidParameter, "contour radius must be positive and finite");
  if (c.panels < 16)
    throw Error(ErrorKind::InvalidParameter, "contour needs at least 16 panels");
  if (!std::isfinite(c.center.real()) || !std::isfinite(c.center.imag()))
    throw Error(ErrorKind::InvalidParameter, "contour center must be finite");
}

bool inside_keepout(cplx t, const Contour& c) {
  return std::abs(t - c.center) < (1.0 + kClearance) * c.radius;
}

/// Points t != a with term(t) == term(a) that fall inside the keep-out disc.
/// Returns false when the continuation is unknown or the zero at a is not
/// simple.
bool extra_preimages_clear(const PsiTerm& term, double a, const Contour& c, std::string& why) {
  const double reach = std::abs(c.center) + (1.0 + kClearance) * c.radius + std::abs(a);
  auto inside = [&](cplx t) {
    if (inside_keepout(t, c)) {
      why = "a second preimage of psi(" + fmt(a) + ") at " + fmt(t.real()) + (t.imag() < 0 ? "" : "+") +
            fmt(t.imag()) + "i lies inside the contour";
      return true;
    }
    return false;
  };
  const double p = term.parameter();
  switch (term.form()) {
    case PsiTerm::Form::Power: {
      if (!is_integer(p)) {
        why = "fractional power " + fmt(p) + " has a branch cut through the contour interior";
        return false;
      }
      const int n = static_cast<int>(std::round(p));
      if (n == 1) return true;
      if (a == 0.0) {
        why = "psi = x^" + std::to_string(n) + " has a multiple zero at 0";
        return false;
      }
      for (int m = 1; m < n; ++m)
        if (inside(a * std::polar(1.0, kTwoPi * m / n))) return false;
      return true;
    }
    case PsiTerm::Form::RationalShifted:
    case PsiTerm::Form::RationalRatio:
      if (inside_keepout(cplx(-p, 0.0), c)) {
        why = "pole of the rational map at " + fmt(-p) + " lies inside the contour";
        return false;
      }
      return true;
    case PsiTerm::Form::Exp: {
      const int K = static_cast<int>(reach * std::abs(p) / kTwoPi) + 1;
      for (int m = -K; m <= K; ++m)
        if (m != 0 && inside(cplx(a, kTwoPi * m / p))) return false;
      return true;
    }
    case PsiTerm::Form::Sin:
    case PsiTerm::Form::Cos: {
      const double period = kTwoPi / p;
      const double mirror = term.form() == PsiTerm::Form::Sin ? std::numbers::pi / p - a : -a;
      const int K = static_cast<int>(reach * p / kTwoPi) + 2;
      for (int m = -K; m <= K; ++m) {
        const double shifted = mirror + m * period;
        if (std::abs(shifted - a) < 1e-12 * std::max(1.0, std::abs(a))) {
          why = "psi' vanishes at " + fmt(a) + ", so the zero there is not simple";
          return false;
        }
        if ((m != 0 && inside(cplx(a + m * period, 0.0))) || inside(cplx(shifted, 0.0)))
          return false;
      }
      return true;
    }
    case PsiTerm::Form::Expression:
      why = "generalized expression families have no verified analytic continuation";
      return false;
  }
  return false;
}

cplx weight(const DlfBasis& basis, cplx t) {
  cplx w = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    w *= basis.psi().term(i).derivative(0, t) - basis.anchor(i);
  return w;
}

cplx classical_weight(const DlfBasis& basis, cplx t) {
  cplx w = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) w *= t - basis.node(i);
  return w;
}

std::vector<double> avoid_points(const DlfBasis& basis, double x) {
  std::vector<double> pts(basis.nodes().values().begin(), basis.nodes().values().end());
  pts.push_back(x);
  return pts;
}

void check_enclosure_only(const DlfBasis& basis, const AnalyticFn& u, double x,
                          const Contour& contour) {
  check_parameters(contour);
  const double limit = (1.0 - kClearance) * contour.radius;
  for (double p : avoid_points(basis, x)) {
    if (!std::isfinite(p) || std::abs(cplx(p, 0.0) - contour.center) > limit)
      throw Error(ErrorKind::ContourEnclosure,
                  "point " + fmt(p) + " is not enclosed with clearance 0.1*radius");
  }
  for (cplx pole : u.poles) {
    if (inside_keepout(pole, contour))
      throw Error(ErrorKind::ContourEnclosure, "pole of u at " + fmt(pole.real()) +
                                                   (pole.imag() < 0 ? "" : "+") +
                                                   fmt(pole.imag()) + "i lies inside the contour");
  }
}

}  // namespace

AnalyticFn analytic_from_expr(const expr::Expr& body, std::vector<cplx> poles) {
  for (const auto& v : body.variables())
    if (v != "x")
      throw Error(ErrorKind::UnboundVariable, "analytic function may only use x, found '" + v + "'");
  AnalyticFn f;
  f.eval = [body](cplx z) { return expr::eval_expr(body, expr::ComplexEnv{{"x", z}}); };
  f.poles = std::move(poles);
  f.name = body.str();
  return f;
}

AnalyticFn analytic_from_string(const std::string& text, std::vector<cplx> poles) {
  return analytic_from_expr(expr::parse_expr(text), std::move(poles));
}

std::vector<cplx> contour_points(const Contour& contour, const std::vector<double>& avoid) {
  check_parameters(contour);
  const int M = contour.panels;
  auto sample = [&](double offset) {
    std::vector<cplx> z(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k)
      z[static_cast<std::size_t>(k)] =
          contour.center + std::polar(contour.radius, kTwoPi * (k + offset) / M);
    return z;
  };
  std::vector<cplx> z = sample(0.0);
  const bool close = std::any_of(z.begin(), z.end(), [&](cplx zk) {
    return std::any_of(avoid.begin(), avoid.end(),
                       [&](double a) { return std::abs(zk - cplx(a, 0.0)) < kNodeAvoidance; });
  });
  return close ? sample(0.5) : z;
}

cplx trapezoid_contour_quad(const std::function<cplx(cplx)>& f, const Contour& contour,
                            const std::vector<double>& avoid) {
  const std::vector<cplx> z = contour_points(contour, avoid);
  cplx sum = 0.0;
  for (cplx zk : z) {
    const cplx v = f(zk);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::NonFinite, "non-finite integrand at z = " + fmt(zk.real()) +
                                            (zk.imag() < 0 ? "" : "+") + fmt(zk.imag()) + "i");
    sum += v * (zk - contour.center);
  }
  return sum / static_cast<double>(z.size());
}

void check_contour(const DlfBasis& basis, const AnalyticFn& u, double x, const Contour& contour) {
  check_enclosure_only(basis, u, x, contour);
  std::string why;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const PsiTerm& term = basis.psi().term(i);
    if (!extra_preimages_clear(term, basis.node(i), contour, why) ||
        !extra_preimages_clear(term, x, contour, why))
      throw Error(ErrorKind::ContourIneligible,
                  std::string("family '") + to_string(basis.psi().kind()) +
                      "' is not contour-eligible here: " + why);
  }
}

std::vector<cplx> contour_interpolant_terms(const DlfBasis& basis, const AnalyticFn& u, double x,
                                            const Contour& contour) {
  check_contour(basis, u, x, contour);
  const cplx wx = weight(basis, cplx(x, 0.0));
  const auto avoid = avoid_points(basis, x);
  std::vector<cplx> terms;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const PsiTerm& psi = basis.psi().term(j);
    const cplx psi_x = psi.derivative(0, cplx(x, 0.0));
    terms.push_back(trapezoid_contour_quad(
        [&](cplx t) {
          const cplx wt = weight(basis, t);
          return psi.derivative(1, t) * u(t) * (wt - wx) / (wt * (psi.derivative(0, t) - psi_x));
        },
        contour, avoid));
  }
  return terms;
}

cplx contour_interpolant(const DlfBasis& basis, const AnalyticFn& u, double x,
                         const Contour& contour) {
  const auto terms = contour_interpolant_terms(basis, u, x, contour);
  cplx sum = 0.0;
  for (cplx t : terms) sum += t;
  return sum / static_cast<double>(terms.size());
}

cplx contour_error(const DlfBasis& basis, const AnalyticFn& u, double x, const Contour& contour) {
  check_contour(basis, u, x, contour);
  const cplx wx = weight(basis, cplx(x, 0.0));
  const auto avoid = avoid_points(basis, x);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const PsiTerm& psi = basis.psi().term(j);
    const cplx psi_x = psi.derivative(0, cplx(x, 0.0));
    sum += trapezoid_contour_quad(
        [&](cplx t) {
          return psi.derivative(1, t) * wx * u(t) /
                 (weight(basis, t) * (psi_x - psi.derivative(0, t)));
        },
        contour, avoid);
  }
  return sum / static_cast<double>(basis.size());
}

cplx classical_contour_error(const DlfBasis& basis, const AnalyticFn& u, double x,
                             const Contour& contour) {
  check_enclosure_only(basis, u, x, contour);
  const cplx wx = classical_weight(basis, cplx(x, 0.0));
  return -trapezoid_contour_quad(
      [&](cplx t) { return wx * u(t) / (classical_weight(basis, t) * (t - x)); }, contour,
      avoid_points(basis, x));
}

cplx classical_contour_interpolant(const DlfBasis& basis, const AnalyticFn& u, double x,
                                   const Contour& contour) {
  check_enclosure_only(basis, u, x, contour);
  const cplx wx = classical_weight(basis, cplx(x, 0.0));
  return trapezoid_contour_quad(
      [&](cplx t) {
        const cplx wt = classical_weight(basis, t);
        return u(t) * (wt - wx) / (wt * (t - x));
      },
      contour, avoid_points(basis, x));
}

ContourCheckRow contour_check_point(const DlfBasis& basis, const AnalyticFn& u, double x,
                                    const Contour& contour) {
  std::vector<double> samples;
  for (std::size_t j = 0; j < basis.size(); ++j) samples.push_back(u(cplx(basis.node(j), 0.0)).real());
  const Interpolant un(basis, samples);
  ContourCheckRow row{};
  row.x = x;
  row.direct_un = un(x);
  row.direct_err = row.direct_un - u(cplx(x, 0.0)).real();
  row.contour_un = contour_interpolant(basis, u, x, contour).real();
  row.contour_err = contour_error(basis, u, x, contour).real();
  row.abs_discrepancy = std::max(std::abs(row.contour_un - row.direct_un),
                                 std::abs(row.contour_err - row.direct_err));
  return row;
}

}  // namespace dlf
