#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlf/expr.hpp"

namespace dlf {

enum class PsiKind {
  Identity,
  Fractional,
  Generalized,
  Rational,
  Exponential,
  FourierSin,
  FourierCos,
  Mixed,
};

const char* to_string(PsiKind kind);
PsiKind psi_kind_from_string(const std::string& name);

enum class RationalVariant {
  Shifted,  // (x - L) / (x + L)
  Ratio,    // x / (x + L)
};

/// User-facing description of a family. Fields irrelevant to `kind` are
/// ignored. Per-index lists, when non-empty, must have one entry per basis
/// function (for mixed: one entry per member of the respective segment).
struct PsiSpec {
  PsiKind kind = PsiKind::Identity;
  double delta = 1.0;                  // fractional exponent
  std::vector<double> lengths;         // rational L_i; empty means L_i = length
  double length = 1.0;
  RationalVariant variant = RationalVariant::Ratio;
  double rate = 1.0;                   // exponential e^{rate x}
  std::vector<double> rates;
  double frequency = 1.0;              // fourier sin/cos(frequency x)
  std::vector<double> frequencies;
  std::size_t split = 0;               // mixed: exp for i <= split, sin after
  std::string expression;              // generalized, in variable x
  int expression_order = 4;            // derivatives prepared for generalized
};

/// One mapping function psi_i with closed-form derivatives of every order.
class PsiTerm {
 public:
  enum class Form { Power, RationalShifted, RationalRatio, Exp, Sin, Cos, Expression };

  static PsiTerm power(double delta);
  static PsiTerm rational_shifted(double length);
  static PsiTerm rational_ratio(double length);
  static PsiTerm exponential(double rate);
  static PsiTerm sine(double frequency);
  static PsiTerm cosine(double frequency);
  /// Derivative tables are built symbolically up to `order`.
  static PsiTerm expression(const expr::Expr& body, int order);

  Form form() const { return form_; }
  double parameter() const { return param_; }

  /// k-th derivative at x (k = 0 is the value).
  double derivative(int k, double x) const;
  std::complex<double> derivative(int k, std::complex<double> z) const;
  double value(double x) const { return derivative(0, x); }

  /// Highest derivative order available; unlimited for closed forms.
  int max_order() const;

  bool same_function(const PsiTerm& other) const;

 private:
  Form form_ = Form::Power;
  double param_ = 1.0;
  std::shared_ptr<const std::vector<expr::Expr>> table_;  // Expression form
};

class PsiFamily {
 public:
  PsiFamily(PsiSpec spec, std::vector<PsiTerm> terms,
            std::optional<std::vector<double>> limits, int max_order);

  PsiKind kind() const { return spec_.kind; }
  const PsiSpec& spec() const { return spec_; }
  std::size_t size() const { return terms_.size(); }
  const PsiTerm& term(std::size_t i) const { return terms_[i]; }
  const std::vector<PsiTerm>& terms() const { return terms_; }

  /// beta_i = lim psi_i(x) as x -> +inf, when finite and known.
  const std::optional<std::vector<double>>& limit_values() const { return limits_; }
  int max_derivative_order() const { return max_order_; }

  /// All psi_i are the same function; partition of unity and the exactness
  /// of the high-order recurrence rely on this.
  bool homogeneous() const;

  double value(std::size_t i, double x) const { return terms_[i].derivative(0, x); }
  double derivative(std::size_t i, int k, double x) const { return terms_[i].derivative(k, x); }

 private:
  PsiSpec spec_;
  std::vector<PsiTerm> terms_;
  std::optional<std::vector<double>> limits_;
  int max_order_;
};

/// Highest derivative order reported for closed-form families.
inline constexpr int kClosedFormOrder = 32;

PsiFamily make_psi_family(const PsiSpec& spec, std::size_t size);

}  // namespace dlf
