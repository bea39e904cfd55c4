#include "dlf/psi.hpp"

#include <cmath>

#include "dlf/error.hpp"

namespace dlf {

namespace {

using cplx = std::complex<double>;

template <typename T>
T integer_power(T base, int n) {
  const bool invert = n < 0;
  unsigned e = static_cast<unsigned>(invert ? -n : n);
  T result = 1.0;
  while (e) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1;
  }
  return invert ? T(1.0) / result : result;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::round(v); }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// delta (delta - 1) ... (delta - k + 1)
double falling_factorial(double delta, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= delta - i;
  return f;
}

template <typename T>
T power_derivative(double delta, int k, T x) {
  if (is_integer(delta) && delta >= 0.0 && k > delta) return T(0.0);
  const double c = falling_factorial(delta, k);
  const double e = delta - k;
  if (is_integer(e)) return c * integer_power(x, static_cast<int>(e));
  return c * std::pow(x, T(e));
}

/// d^k/dx^k of scale / (x + L).
template <typename T>
T reciprocal_derivative(double scale, double length, int k, T x) {
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return scale * sign * factorial(k) * integer_power(x + length, -k - 1);
}

template <typename T>
T trig_derivative(bool sine, double freq, int k, T x) {
  const T arg = freq * x;
  const double scale = integer_power(freq, k);
  // sin^(k) = sin(. + k pi/2), handled exactly by quadrant.
  int quadrant = (k + (sine ? 0 : 1)) % 4;
  switch (quadrant) {
    case 0: return scale * std::sin(arg);
    case 1: return scale * std::cos(arg);
    case 2: return -scale * std::sin(arg);
    default: return -scale * std::cos(arg);
  }
}

std::vector<double> per_index(const std::vector<double>& list, double fallback,
                              std::size_t count, const char* what) {
  if (list.empty()) return std::vector<double>(count, fallback);
  if (list.size() != count)
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + " list has " + std::to_string(list.size()) +
                    " entries, expected " + std::to_string(count));
  return list;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw Error(ErrorKind::InvalidParameter, std::string(what) + " must be finite");
}

}  // namespace

const char* to_string(PsiKind kind) {
  switch (kind) {
    case PsiKind::Identity: return "identity";
    case PsiKind::Fractional: return "fractional";
    case PsiKind::Generalized: return "generalized";
    case PsiKind::Rational: return "rational";
    case PsiKind::Exponential: return "exponential";
    case PsiKind::FourierSin: return "fourier-sin";
    case PsiKind::FourierCos: return "fourier-cos";
    case PsiKind::Mixed: return "mixed";
  }
  return "?";
}

PsiKind psi_kind_from_string(const std::string& name) {
  for (PsiKind k : {PsiKind::Identity, PsiKind::Fractional, PsiKind::Generalized,
                    PsiKind::Rational, PsiKind::Exponential, PsiKind::FourierSin,
                    PsiKind::FourierCos, PsiKind::Mixed}) {
    if (name == to_string(k)) return k;
  }
  if (name == "classical") return PsiKind::Identity;
  if (name == "fourier") return PsiKind::FourierSin;
  throw Error(ErrorKind::UnsupportedKind, "unsupported family kind '" + name + "'");
}

// ---- PsiTerm ----

PsiTerm PsiTerm::power(double delta) {
  PsiTerm t;
  t.form_ = Form::Power;
  t.param_ = delta;
  return t;
}

PsiTerm PsiTerm::rational_shifted(double length) {
  PsiTerm t;
  t.form_ = Form::RationalShifted;
  t.param_ = length;
  return t;
}

PsiTerm PsiTerm::rational_ratio(double length) {
  PsiTerm t;
  t.form_ = Form::RationalRatio;
  t.param_ = length;
  return t;
}

PsiTerm PsiTerm::exponential(double rate) {
  PsiTerm t;
  t.form_ = Form::Exp;
  t.param_ = rate;
  return t;
}

PsiTerm PsiTerm::sine(double frequency) {
  PsiTerm t;
  t.form_ = Form::Sin;
  t.param_ = frequency;
  return t;
}

PsiTerm PsiTerm::cosine(double frequency) {
  PsiTerm t;
  t.form_ = Form::Cos;
  t.param_ = frequency;
  return t;
}

PsiTerm PsiTerm::expression(const expr::Expr& body, int order) {
  for (const auto& name : body.variables()) {
    if (name != "x")
      throw Error(ErrorKind::InvalidParameter,
                  "mapping expression may only reference x, found '" + name + "'");
  }
  auto table = std::make_shared<std::vector<expr::Expr>>();
  table->push_back(body);
  for (int k = 1; k <= order; ++k) table->push_back(expr::diff_expr(table->back(), "x"));
  PsiTerm t;
  t.form_ = Form::Expression;
  t.param_ = order;
  t.table_ = std::move(table);
  return t;
}

int PsiTerm::max_order() const {
  return form_ == Form::Expression ? static_cast<int>(table_->size()) - 1 : kClosedFormOrder;
}

double PsiTerm::derivative(int k, double x) const {
  switch (form_) {
    case Form::Power: return power_derivative(param_, k, x);
    case Form::RationalShifted:
      return k == 0 ? (x - param_) / (x + param_)
                    : reciprocal_derivative(-2.0 * param_, param_, k, x);
    case Form::RationalRatio:
      return k == 0 ? x / (x + param_) : reciprocal_derivative(-param_, param_, k, x);
    case Form::Exp: return integer_power(param_, k) * std::exp(param_ * x);
    case Form::Sin: return trig_derivative(true, param_, k, x);
    case Form::Cos: return trig_derivative(false, param_, k, x);
    case Form::Expression:
      if (k > max_order())
        throw Error(ErrorKind::InsufficientDerivativeOrder,
                    "mapping expression derivative of order " + std::to_string(k) +
                        " not prepared (max " + std::to_string(max_order()) + ")");
      return expr::eval_expr((*table_)[static_cast<std::size_t>(k)], expr::Env{{"x", x}});
  }
  return 0.0;
}

std::complex<double> PsiTerm::derivative(int k, std::complex<double> z) const {
  switch (form_) {
    case Form::Power: return power_derivative(param_, k, z);
    case Form::RationalShifted:
      return k == 0 ? (z - param_) / (z + param_)
                    : reciprocal_derivative(-2.0 * param_, param_, k, z);
    case Form::RationalRatio:
      return k == 0 ? z / (z + param_) : reciprocal_derivative(-param_, param_, k, z);
    case Form::Exp: return integer_power(param_, k) * std::exp(param_ * z);
    case Form::Sin: return trig_derivative(true, param_, k, z);
    case Form::Cos: return trig_derivative(false, param_, k, z);
    case Form::Expression:
      if (k > max_order())
        throw Error(ErrorKind::InsufficientDerivativeOrder, "derivative order not prepared");
      return expr::eval_expr((*table_)[static_cast<std::size_t>(k)],
                             expr::ComplexEnv{{"x", z}});
  }
  return 0.0;
}

bool PsiTerm::same_function(const PsiTerm& other) const {
  if (form_ != other.form_ || param_ != other.param_) return false;
  if (form_ == Form::Expression) return table_->front() == other.table_->front();
  return true;
}

// ---- PsiFamily ----

PsiFamily::PsiFamily(PsiSpec spec, std::vector<PsiTerm> terms,
                     std::optional<std::vector<double>> limits, int max_order)
    : spec_(std::move(spec)),
      terms_(std::move(terms)),
      limits_(std::move(limits)),
      max_order_(max_order) {}

bool PsiFamily::homogeneous() const {
  for (const auto& t : terms_)
    if (!t.same_function(terms_.front())) return false;
  return true;
}

PsiFamily make_psi_family(const PsiSpec& spec, std::size_t size) {
  if (size < 2)
    throw Error(ErrorKind::InvalidParameter, "a family needs at least 2 functions (N >= 1)");

  std::vector<PsiTerm> terms;
  terms.reserve(size);
  std::optional<std::vector<double>> limits;
  int max_order = kClosedFormOrder;

  switch (spec.kind) {
    case PsiKind::Identity:
      terms.assign(size, PsiTerm::power(1.0));
      break;

    case PsiKind::Fractional:
      if (!(spec.delta > 0.0) || !std::isfinite(spec.delta))
        throw Error(ErrorKind::InvalidParameter, "fractional exponent delta must be > 0");
      terms.assign(size, PsiTerm::power(spec.delta));
      break;

    case PsiKind::Generalized: {
      if (spec.expression.empty())
        throw Error(ErrorKind::InvalidParameter, "generalized family needs an expression");
      if (spec.expression_order < 1)
        throw Error(ErrorKind::InvalidParameter, "expression derivative order must be >= 1");
      const PsiTerm t = PsiTerm::expression(expr::parse_expr(spec.expression),
                                            spec.expression_order);
      terms.assign(size, t);
      max_order = spec.expression_order;
      break;
    }

    case PsiKind::Rational: {
      const auto lengths = per_index(spec.lengths, spec.length, size, "rational length");
      for (double L : lengths) {
        if (!(L > 0.0) || !std::isfinite(L))
          throw Error(ErrorKind::InvalidParameter, "rational lengths L_i must be > 0");
        terms.push_back(spec.variant == RationalVariant::Shifted ? PsiTerm::rational_shifted(L)
                                                                 : PsiTerm::rational_ratio(L));
      }
      limits = std::vector<double>(size, 1.0);
      break;
    }

    case PsiKind::Exponential:
      for (double r : per_index(spec.rates, spec.rate, size, "exponential rate")) {
        require_finite(r, "exponential rate");
        terms.push_back(PsiTerm::exponential(r));
      }
      break;

    case PsiKind::FourierSin:
    case PsiKind::FourierCos:
      for (double w : per_index(spec.frequencies, spec.frequency, size, "fourier frequency")) {
        require_finite(w, "fourier frequency");
        terms.push_back(spec.kind == PsiKind::FourierSin ? PsiTerm::sine(w) : PsiTerm::cosine(w));
      }
      break;

    case PsiKind::Mixed: {
      if (spec.split >= size)
        throw Error(ErrorKind::InvalidParameter,
                    "mixed split index " + std::to_string(spec.split) + " outside [0, " +
                        std::to_string(size - 1) + "]");
      const std::size_t n_exp = spec.split + 1;
      const auto rates = per_index(spec.rates, spec.rate, n_exp, "mixed rate");
      const auto freqs = per_index(spec.frequencies, spec.frequency, size - n_exp,
                                   "mixed frequency");
      for (double r : rates) {
        require_finite(r, "mixed rate");
        terms.push_back(PsiTerm::exponential(r));
      }
      for (double w : freqs) {
        require_finite(w, "mixed frequency");
        terms.push_back(PsiTerm::sine(w));
      }
      break;
    }
  }
  return PsiFamily(spec, std::move(terms), std::move(limits), max_order);
}

}  // namespace dlf
