#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "dlf/diffmat.hpp"
#include "dlf/expr.hpp"
#include "dlf/interp.hpp"

namespace dlf {

enum class Side { Initial, Boundary };  // face a_i, face b_i

struct DimensionSpec {
  double a = 0.0;
  double b = 1.0;
  int order = 0;           // v^(i): highest derivative in this dimension
  int initial_count = 0;   // v^(i)_1: conditions at a_i
  int boundary_count = 0;  // v^(i)_2: conditions at b_i
};

/// d^order u / d x_dim^order on the face x_dim = a_dim (Initial) or b_dim
/// (Boundary) equals `value`, an expression in the remaining coordinates.
struct ConditionSpec {
  std::size_t dim = 0;
  Side side = Side::Initial;
  int order = 0;
  expr::Expr value;
};

/// Q u = h on a box, with Q given as a residual expression.
///
/// Variable names: 1D uses x, u, du, d2u, d3u, ...; p-D uses x1..xp (x, y, z
/// as aliases when p <= 3) and u_{k1,...,kp} for partial derivatives, u for
/// the function itself.
struct CollocationProblem {
  std::vector<DimensionSpec> dims;
  expr::Expr residual;
  expr::Expr rhs;
  std::vector<ConditionSpec> conditions;
  std::optional<bool> linear;  // overrides syntactic detection
};

enum class RowRole { Interior, Initial, Boundary };

/// Square system F(U) = 0 over the tensor grid of nodal values. Rows are
/// ordered interior, then initial, then boundary.
class CollocationSystem {
 public:
  struct Impl;

  explicit CollocationSystem(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::size_t unknowns() const;
  std::size_t dimension() const;
  const std::vector<DlfBasis>& bases() const;
  const std::vector<RowRole>& roles() const;
  std::size_t interior_rows() const;
  /// Grid points that sit on faces of two or more dimensions; each receives
  /// only the condition of its lowest such dimension.
  std::size_t overlap_count() const;
  bool linear() const;

  /// Flat grid index per row (for interior rows, the collocation point).
  const std::vector<std::size_t>& row_points() const;

  Eigen::VectorXd residual(const Eigen::VectorXd& u) const;
  /// Forward differences with step rel_step * (1 + |u_j|).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u, double rel_step = 1e-7) const;
  /// Exact matrix of an affine system, probed with unit vectors.
  Eigen::MatrixXd linear_matrix() const;

  /// max |h| over the interior collocation points.
  double rhs_norm() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

CollocationSystem assemble_collocation_1d(const CollocationProblem& problem,
                                          const DlfBasis& basis);
CollocationSystem assemble_collocation_nd(const CollocationProblem& problem,
                                          const std::vector<DlfBasis>& bases);

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
  int max_halvings = 8;
  double jacobian_step = 1e-7;
  std::optional<std::vector<double>> initial_guess;
};

struct SolveReport {
  bool linear = true;
  int iterations = 0;
  double residual_norm = 0.0;       // max |F(U)| over all rows
  double interior_residual = 0.0;   // max |Res(x_i)| over collocation points
  double condition_residual = 0.0;  // max over condition rows
  double condition_estimate = 0.0;  // 1 / rcond of the last factorized matrix
};

struct SolveResult {
  std::variant<Interpolant, TensorInterpolant> solution;
  std::vector<double> values;  // nodal values, last dimension fastest
  SolveReport report;
};

SolveResult solve_system(const CollocationSystem& system, const SolveOptions& options = {});

}  // namespace dlf
