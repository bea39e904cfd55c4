#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dlf/psi.hpp"

namespace dlf {

enum class NodeScheme { Equispaced, ChebyshevGaussLobatto, UserSupplied };

const char* to_string(NodeScheme scheme);
NodeScheme node_scheme_from_string(const std::string& name);

/// Strictly increasing interpolation nodes x_0 < ... < x_N inside [a, b].
/// The domain may be unbounded (b = +inf) while the nodes stay finite.
class NodeSet {
 public:
  NodeSet(double a, double b, std::vector<double> nodes,
          NodeScheme scheme = NodeScheme::UserSupplied);

  double a() const { return a_; }
  double b() const { return b_; }
  NodeScheme scheme() const { return scheme_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t degree() const { return nodes_.size() - 1; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::span<const double> values() const { return nodes_; }
  bool bounded() const;

  /// x lies in [a, b] up to a rounding slack.
  bool contains(double x) const;

 private:
  double a_;
  double b_;
  std::vector<double> nodes_;
  NodeScheme scheme_;
};

/// Chebyshev-Gauss-Lobatto nodes use -cos(k pi / N) mapped affinely onto
/// [a, b]; both schemes place x_0 = a and x_N = b exactly.
NodeSet generate_nodes(NodeScheme scheme, std::size_t N, double a, double b);

/// Absolute tolerance for the two admissibility conditions.
inline constexpr double kSeparationTolerance = 1e-10;

/// A family paired with nodes that satisfy
///   (i)  psi_i(x_j) != psi_i(x_i) for all i != j, and
///   (ii) psi_i'(x_i) != 0,
/// with the node quantities every other module needs cached.
class DlfBasis {
 public:
  const PsiFamily& psi() const { return psi_; }
  const NodeSet& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }

  /// psi_i(x_i).
  double anchor(std::size_t i) const { return anchors_[i]; }
  /// psi_i(x_j) - psi_i(x_i), stored row i, column j.
  double gap(std::size_t i, std::size_t j) const { return gaps_[i * size() + j]; }
  /// psi_i^{(k)}(x_i).
  double own_derivative(std::size_t i, int k) const { return psi_.derivative(i, k, node(i)); }

  std::span<const double> mu() const { return mu_; }
  /// (w^psi)'(x_j) and (w^psi)''(x_j).
  std::span<const double> wprime() const { return wprime_; }
  std::span<const double> wsecond() const { return wsecond_; }

 private:
  DlfBasis(PsiFamily psi, NodeSet nodes) : psi_(std::move(psi)), nodes_(std::move(nodes)) {}
  friend DlfBasis validate_basis(PsiFamily psi, NodeSet nodes, double tolerance);

  PsiFamily psi_;
  NodeSet nodes_;
  std::vector<double> anchors_;
  std::vector<double> gaps_;
  std::vector<double> mu_;
  std::vector<double> wprime_;
  std::vector<double> wsecond_;
};

DlfBasis validate_basis(PsiFamily psi, NodeSet nodes,
                        double tolerance = kSeparationTolerance);

/// w^psi(x) = prod_i (psi_i(x) - psi_i(x_i)); exactly zero at the nodes.
double weight_eval(const DlfBasis& basis, double x);

/// L_j(x) by the product of ratios. Exact Kronecker delta at the nodes.
double dlf_eval(const DlfBasis& basis, std::size_t j, double x);

/// All L_j(x). Same arithmetic as dlf_eval.
std::vector<double> dlf_eval_all(const DlfBasis& basis, double x);

/// Product form without the domain check. Finite-difference stencils step
/// slightly past the endpoints and use this.
double dlf_eval_unchecked(const DlfBasis& basis, std::size_t j, double x);

/// mu_j w(x) / (psi_j(x) - psi_j(x_j)). Undefined (0/0) at x_j; only used
/// to cross-check the product form away from the nodes.
double dlf_eval_weight_form(const DlfBasis& basis, std::size_t j, double x);

/// lim_{x->inf} L_j(x) when the family declares its limits.
std::optional<double> dlf_limit(const DlfBasis& basis, std::size_t j);

}  // namespace dlf
