#include "dlf/basis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dlf/error.hpp"

namespace dlf {

namespace {

void check_index(const DlfBasis& basis, std::size_t j) {
  if (j >= basis.size())
    throw Error(ErrorKind::IndexOutOfRange, "basis index " + std::to_string(j) +
                                                " out of range [0, " +
                                                std::to_string(basis.size() - 1) + "]");
}

void check_domain(const DlfBasis& basis, double x) {
  if (!basis.nodes().contains(x)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "x = " << x << " lies outside the domain [" << basis.nodes().a() << ", "
        << basis.nodes().b() << "]";
    throw Error(ErrorKind::DomainViolation, msg.str());
  }
}

bool kind_allows_unbounded(PsiKind kind) {
  return kind == PsiKind::Rational || kind == PsiKind::Exponential;
}

}  // namespace

const char* to_string(NodeScheme scheme) {
  switch (scheme) {
    case NodeScheme::Equispaced: return "equispaced";
    case NodeScheme::ChebyshevGaussLobatto: return "cgl";
    case NodeScheme::UserSupplied: return "user";
  }
  return "?";
}

NodeScheme node_scheme_from_string(const std::string& name) {
  if (name == "cgl" || name == "chebyshev-gauss-lobatto") return NodeScheme::ChebyshevGaussLobatto;
  if (name == "equispaced" || name == "uniform") return NodeScheme::Equispaced;
  if (name == "user" || name == "user-supplied") return NodeScheme::UserSupplied;
  throw Error(ErrorKind::InvalidParameter, "unknown node scheme '" + name + "'");
}

NodeSet::NodeSet(double a, double b, std::vector<double> nodes, NodeScheme scheme)
    : a_(a), b_(b), nodes_(std::move(nodes)), scheme_(scheme) {
  if (std::isnan(a_) || std::isnan(b_) || !(a_ < b_))
    throw Error(ErrorKind::InvalidParameter, "domain requires a < b");
  if (nodes_.size() < 2)
    throw Error(ErrorKind::InvalidParameter, "node set needs N >= 1 (at least 2 nodes)");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i]))
      throw Error(ErrorKind::InvalidParameter, "nodes must be finite");
    if (nodes_[i] < a_ || nodes_[i] > b_)
      throw Error(ErrorKind::InvalidParameter,
                  "node " + std::to_string(i) + " lies outside the domain");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw Error(ErrorKind::InvalidParameter, "nodes must be strictly increasing");
  }
}

bool NodeSet::bounded() const { return std::isfinite(a_) && std::isfinite(b_); }

bool NodeSet::contains(double x) const {
  if (std::isnan(x)) return false;
  const double scale =
      bounded() ? std::max({1.0, std::abs(a_), std::abs(b_)}) : std::max(1.0, std::abs(x));
  const double slack = 64 * std::numeric_limits<double>::epsilon() * scale;
  return x >= a_ - slack && x <= b_ + slack;
}

NodeSet generate_nodes(NodeScheme scheme, std::size_t N, double a, double b) {
  if (N < 1) throw Error(ErrorKind::InvalidParameter, "N must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw Error(ErrorKind::InvalidParameter, "node generation needs finite a < b");
  std::vector<double> x(N + 1);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  switch (scheme) {
    case NodeScheme::ChebyshevGaussLobatto:
      for (std::size_t k = 0; k <= N; ++k) {
        // -cos(k pi / N) written as a sine so the set is exactly symmetric.
        const double s = std::sin(std::numbers::pi * (2.0 * static_cast<double>(k) -
                                                      static_cast<double>(N)) /
                                  (2.0 * static_cast<double>(N)));
        x[k] = mid + half * s;
      }
      break;
    case NodeScheme::Equispaced:
      for (std::size_t k = 0; k <= N; ++k)
        x[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(N);
      break;
    case NodeScheme::UserSupplied:
      throw Error(ErrorKind::InvalidParameter, "user-supplied nodes cannot be generated");
  }
  x.front() = a;
  x.back() = b;
  return NodeSet(a, b, std::move(x), scheme);
}

DlfBasis validate_basis(PsiFamily psi, NodeSet nodes, double tolerance) {
  const std::size_t n = nodes.size();
  if (psi.size() != n)
    throw Error(ErrorKind::LengthMismatch, "family has " + std::to_string(psi.size()) +
                                               " functions but there are " +
                                               std::to_string(n) + " nodes");
  if (!nodes.bounded() && !kind_allows_unbounded(psi.kind()))
    throw Error(ErrorKind::DomainViolation,
                std::string("family '") + to_string(psi.kind()) +
                    "' does not support an unbounded domain");
  if (psi.max_derivative_order() < 2)
    throw Error(ErrorKind::InsufficientDerivativeOrder,
                "the first-order operational matrix needs psi'' (derivative order >= 2)");

  DlfBasis basis(std::move(psi), std::move(nodes));
  const PsiFamily& f = basis.psi_;
  auto x = [&](std::size_t i) { return basis.nodes_[i]; };

  auto finite = [](double v, const std::string& what) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, what + " is not finite");
  };

  basis.anchors_.resize(n);
  basis.gaps_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    basis.anchors_[i] = f.value(i, x(i));
    finite(basis.anchors_[i], "psi_" + std::to_string(i) + "(x_" + std::to_string(i) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f.value(i, x(j));
      finite(v, "psi_" + std::to_string(i) + "(x_" + std::to_string(j) + ")");
      const double g = v - basis.anchors_[i];
      basis.gaps_[i * n + j] = g;
      if (i != j && std::abs(g) <= tolerance)
        throw Error(ErrorKind::SeparationViolation,
                    "condition (i) fails for pair (i, j) = (" + std::to_string(i) + ", " +
                        std::to_string(j) + "): psi_i(x_j) == psi_i(x_i)");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d = f.derivative(i, 1, x(i));
    finite(d, "psi_" + std::to_string(i) + "'(x_" + std::to_string(i) + ")");
    if (std::abs(d) <= tolerance)
      throw Error(ErrorKind::DegenerateDerivative,
                  "condition (ii) fails for i = " + std::to_string(i) + ": psi_i'(x_i) == 0");
  }

  basis.mu_.resize(n);
  basis.wprime_.resize(n);
  basis.wsecond_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double q = 1.0;        // prod_{i != j} (psi_i(x_j) - psi_i(x_i))
    double log_sum = 0.0;  // sum_{i != j} psi_i'(x_j) / (psi_i(x_j) - psi_i(x_i))
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const double g = basis.gaps_[i * n + j];
      q *= g;
      log_sum += f.derivative(i, 1, x(j)) / g;
    }
    const double d1 = f.derivative(j, 1, x(j));
    const double d2 = f.derivative(j, 2, x(j));
    basis.wprime_[j] = d1 * q;
    basis.wsecond_[j] = q * (d2 + 2.0 * d1 * log_sum);
    basis.mu_[j] = d1 / basis.wprime_[j];
    finite(basis.wprime_[j], "(w^psi)'(x_" + std::to_string(j) + ")");
    finite(basis.wsecond_[j], "(w^psi)''(x_" + std::to_string(j) + ")");
    if (!std::isfinite(basis.mu_[j]) || basis.mu_[j] == 0.0)
      throw Error(ErrorKind::NonFinite, "mu_" + std::to_string(j) + " is zero or not finite");
  }
  return basis;
}

double weight_eval(const DlfBasis& basis, double x) {
  check_domain(basis, x);
  double w = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) w *= basis.psi().value(i, x) - basis.anchor(i);
  return w;
}

double dlf_eval_unchecked(const DlfBasis& basis, std::size_t j, double x) {
  double l = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i == j) continue;
    l *= (basis.psi().value(i, x) - basis.anchor(i)) / basis.gap(i, j);
  }
  return l;
}

double dlf_eval(const DlfBasis& basis, std::size_t j, double x) {
  check_index(basis, j);
  check_domain(basis, x);
  return dlf_eval_unchecked(basis, j, x);
}

std::vector<double> dlf_eval_all(const DlfBasis& basis, double x) {
  check_domain(basis, x);
  const std::size_t n = basis.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = basis.psi().value(i, x) - basis.anchor(i);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double l = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      l *= diff[i] / basis.gap(i, j);
    }
    out[j] = l;
  }
  return out;
}

double dlf_eval_weight_form(const DlfBasis& basis, std::size_t j, double x) {
  check_index(basis, j);
  return basis.mu()[j] * weight_eval(basis, x) / (basis.psi().value(j, x) - basis.anchor(j));
}

std::optional<double> dlf_limit(const DlfBasis& basis, std::size_t j) {
  check_index(basis, j);
  const auto& beta = basis.psi().limit_values();
  if (!beta) return std::nullopt;
  double l = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i == j) continue;
    l *= ((*beta)[i] - basis.anchor(i)) / basis.gap(i, j);
  }
  return l;
}

}  // namespace dlf
