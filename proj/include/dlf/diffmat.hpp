#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dlf/basis.hpp"

namespace dlf {

enum class Provenance {
  ClosedForm,      // first-order matrix from the explicit entry formula
  Recurrence,      // high-order matrix from the P-weighted recurrence
  ClassicalPower,  // (D1)^m
  FdOracle,        // finite differences of the product form
};

const char* to_string(Provenance p);

/// Operational matrix: entry (k, j) is d^m L_j / dx^m at x_k, so that the
/// nodal derivative values are D * U.
struct DiffMatrix {
  int order = 1;
  Eigen::MatrixXd entries;
  Provenance provenance = Provenance::ClosedForm;

  Eigen::Index rows() const { return entries.rows(); }
  double operator()(Eigen::Index k, Eigen::Index j) const { return entries(k, j); }
};

/// Diagonals P^(k) = diag(psi_i^{(k+1)}(x_i)), k = 0..m-1, and P^{-1}.
struct PStack {
  std::vector<Eigen::VectorXd> diagonals;
  Eigen::VectorXd inverse;
};

PStack make_pstack(const DlfBasis& basis, int m);

DiffMatrix d1_matrix(const DlfBasis& basis);

/// D^(m) by
///   D^(m) = ( sum_{k=0}^{m-1} C(m-1, k) P^(k) D^(m-1-k) ) P^{-1} D^(1),
/// with D^(0) = I.
DiffMatrix dm_matrix(const DlfBasis& basis, int m);

/// D^(1), ..., D^(m) from one pass of the recurrence; element k-1 has order k.
std::vector<DiffMatrix> dm_sequence(const DlfBasis& basis, int m);

DiffMatrix dm_power_classical(const DlfBasis& basis, int m);

/// Independent check: 4th-order central differences of the product form with
/// one Richardson level (h, h/2). The stencil width at x_k is the local node
/// spacing times step^(1/m). A second Richardson estimate at (h/2, h/4) must
/// agree to 1e-4 relative, otherwise the step is rejected as roundoff-bound.
DiffMatrix dm_oracle_fd(const DlfBasis& basis, int m, double step = 1e-4);

double max_abs_diff(const DiffMatrix& a, const DiffMatrix& b);
double max_abs_row_sum(const DiffMatrix& d);

/// Row-major CSV, one row per line, "%.16e" entries.
std::string to_csv(const DiffMatrix& d);

}  // namespace dlf
