#include "dlf/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "dlf/error.hpp"

namespace dlf {

namespace {

[[noreturn]] void assembly_error(const std::string& what) {
  throw Error(ErrorKind::AssemblyError, what);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// Derivative multi-index named by a symbol, or nullopt for non-u names.
std::optional<std::vector<int>> derivative_symbol(const std::string& name, std::size_t p) {
  if (name == "u") return std::vector<int>(p, 0);
  if (p == 1) {
    if (name == "du") return std::vector<int>{1};
    if (name.size() > 2 && name.front() == 'd' && name.back() == 'u') {
      const std::string_view digits(name.data() + 1, name.size() - 2);
      if (all_digits(digits)) return std::vector<int>{std::stoi(std::string(digits))};
    }
  }
  if (name.rfind("u_{", 0) == 0 && name.back() == '}') {
    std::vector<int> orders;
    std::stringstream body(name.substr(3, name.size() - 4));
    std::string item;
    while (std::getline(body, item, ',')) {
      if (!all_digits(item)) return std::nullopt;
      orders.push_back(std::stoi(item));
    }
    if (orders.size() != p)
      assembly_error("derivative symbol '" + name + "' needs " + std::to_string(p) + " indices");
    return orders;
  }
  return std::nullopt;
}

std::vector<std::string> coordinate_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t d = 0; d < p; ++d) names.push_back("x" + std::to_string(d + 1));
  return names;
}

/// Alias -> dimension for names other than x1..xp.
std::map<std::string, std::size_t> coordinate_aliases(std::size_t p) {
  std::map<std::string, std::size_t> aliases;
  if (p == 1) aliases["x"] = 0;
  if (p >= 2 && p <= 3) {
    const char* names[] = {"x", "y", "z"};
    for (std::size_t d = 0; d < p; ++d) aliases[names[d]] = d;
  }
  return aliases;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

struct CollocationSystem::Impl {
  struct ConditionRow {
    std::size_t point;
    std::size_t dim;
    std::size_t face_index;
    int order;
    double value;
  };

  std::vector<DlfBasis> bases;
  std::vector<std::size_t> shape;
  std::vector<std::size_t> strides;
  std::size_t total = 0;
  // deriv[d][k] = D^(k) in dimension d, k = 0 is the identity.
  std::vector<std::vector<Eigen::MatrixXd>> deriv;

  std::vector<std::string> slots;  // coordinates, aliases, then u-symbols
  std::vector<std::size_t> alias_dims;
  std::vector<std::vector<int>> symbols;
  expr::BoundExpr lhs;
  expr::BoundExpr rhs;

  std::vector<std::size_t> interior;
  std::vector<ConditionRow> conditions;  // already in initial-then-boundary order
  std::vector<RowRole> roles;
  std::vector<std::size_t> row_points;
  bool linear = true;
  std::size_t overlaps = 0;
  double rhs_norm = 0.0;

  std::vector<std::size_t> unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t d = 0; d < shape.size(); ++d) {
      idx[d] = flat / strides[d];
      flat %= strides[d];
    }
    return idx;
  }

  // Applies D along dimension d of a field laid out last-fastest.
  Eigen::VectorXd apply(const Eigen::MatrixXd& D, std::size_t d, const Eigen::VectorXd& f) const {
    Eigen::VectorXd out(f.size());
    const std::size_t n = shape[d];
    const std::size_t stride = strides[d];
    const std::size_t block = n * stride;
    for (std::size_t outer = 0; outer < total; outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (std::size_t r = 0; r < n; ++r) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j)
            s += D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) *
                 f[static_cast<Eigen::Index>(base + j * stride)];
          out[static_cast<Eigen::Index>(base + r * stride)] = s;
        }
      }
    }
    return out;
  }

  Eigen::VectorXd field(const std::vector<int>& orders, const Eigen::VectorXd& u) const {
    Eigen::VectorXd f = u;
    for (std::size_t d = 0; d < orders.size(); ++d)
      if (orders[d] > 0) f = apply(deriv[d][static_cast<std::size_t>(orders[d])], d, f);
    return f;
  }

  void coordinates(std::size_t flat, std::vector<double>& values) const {
    const auto idx = unravel(flat);
    for (std::size_t d = 0; d < shape.size(); ++d) values[d] = bases[d].node(idx[d]);
    for (std::size_t a = 0; a < alias_dims.size(); ++a)
      values[shape.size() + a] = values[alias_dims[a]];
  }

  Eigen::VectorXd interior_residual(const Eigen::VectorXd& u, Eigen::VectorXd* h_out) const {
    std::vector<Eigen::VectorXd> fields;
    fields.reserve(symbols.size());
    for (const auto& s : symbols) fields.push_back(field(s, u));
    const std::size_t coord_slots = shape.size() + alias_dims.size();
    std::vector<double> values(slots.size());
    Eigen::VectorXd res(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t r = 0; r < interior.size(); ++r) {
      const std::size_t p = interior[r];
      coordinates(p, values);
      for (std::size_t s = 0; s < fields.size(); ++s)
        values[coord_slots + s] = fields[s][static_cast<Eigen::Index>(p)];
      const double h = rhs(values);
      res[static_cast<Eigen::Index>(r)] = lhs(values) - h;
      if (h_out) (*h_out)[static_cast<Eigen::Index>(r)] = h;
    }
    return res;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
    if (static_cast<std::size_t>(u.size()) != total)
      throw Error(ErrorKind::LengthMismatch, "residual needs " + std::to_string(total) +
                                                 " nodal values");
    Eigen::VectorXd out(static_cast<Eigen::Index>(total));
    out.head(static_cast<Eigen::Index>(interior.size())) = interior_residual(u, nullptr);
    Eigen::Index row = static_cast<Eigen::Index>(interior.size());
    for (const auto& c : conditions) {
      const auto idx = unravel(c.point);
      const std::size_t base = c.point - idx[c.dim] * strides[c.dim];
      const Eigen::MatrixXd& D = deriv[c.dim][static_cast<std::size_t>(c.order)];
      double s = 0.0;
      for (std::size_t j = 0; j < shape[c.dim]; ++j)
        s += D(static_cast<Eigen::Index>(c.face_index), static_cast<Eigen::Index>(j)) *
             u[static_cast<Eigen::Index>(base + j * strides[c.dim])];
      out[row++] = s - c.value;
    }
    return out;
  }
};

std::size_t CollocationSystem::unknowns() const { return impl_->total; }
std::size_t CollocationSystem::dimension() const { return impl_->shape.size(); }
const std::vector<DlfBasis>& CollocationSystem::bases() const { return impl_->bases; }
const std::vector<RowRole>& CollocationSystem::roles() const { return impl_->roles; }
std::size_t CollocationSystem::interior_rows() const { return impl_->interior.size(); }
std::size_t CollocationSystem::overlap_count() const { return impl_->overlaps; }
bool CollocationSystem::linear() const { return impl_->linear; }
const std::vector<std::size_t>& CollocationSystem::row_points() const { return impl_->row_points; }
double CollocationSystem::rhs_norm() const { return impl_->rhs_norm; }

Eigen::VectorXd CollocationSystem::residual(const Eigen::VectorXd& u) const {
  return impl_->residual(u);
}

Eigen::MatrixXd CollocationSystem::jacobian(const Eigen::VectorXd& u, double rel_step) const {
  const auto n = static_cast<Eigen::Index>(impl_->total);
  const Eigen::VectorXd f0 = residual(u);
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd probe = u;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = rel_step * (1.0 + std::abs(u[j]));
    probe[j] = u[j] + h;
    J.col(j) = (residual(probe) - f0) / h;
    probe[j] = u[j];
  }
  return J;
}

Eigen::MatrixXd CollocationSystem::linear_matrix() const {
  const auto n = static_cast<Eigen::Index>(impl_->total);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd f0 = residual(zero);
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd probe = zero;
  for (Eigen::Index j = 0; j < n; ++j) {
    probe[j] = 1.0;
    A.col(j) = residual(probe) - f0;
    probe[j] = 0.0;
  }
  return A;
}

CollocationSystem assemble_collocation_nd(const CollocationProblem& problem,
                                          const std::vector<DlfBasis>& bases) {
  const std::size_t p = problem.dims.size();
  if (p == 0) assembly_error("problem has no dimensions");
  if (bases.size() != p)
    assembly_error("problem has " + std::to_string(p) + " dimensions but " +
                   std::to_string(bases.size()) + " bases were given");

  auto impl = std::make_shared<CollocationSystem::Impl>();
  impl->bases = bases;
  impl->shape.resize(p);
  impl->strides.resize(p);
  for (std::size_t d = 0; d < p; ++d) impl->shape[d] = bases[d].size();
  impl->total = 1;
  for (std::size_t d = p; d-- > 0;) {
    impl->strides[d] = impl->total;
    impl->total *= impl->shape[d];
  }

  // Orders, splits and operational matrices per dimension.
  for (std::size_t d = 0; d < p; ++d) {
    const DimensionSpec& dim = problem.dims[d];
    const std::string tag = "dimension " + std::to_string(d + 1);
    if (dim.order < 0 || dim.initial_count < 0 || dim.boundary_count < 0)
      assembly_error(tag + ": orders must be non-negative");
    if (dim.initial_count + dim.boundary_count != dim.order)
      assembly_error(tag + ": initial + boundary condition counts must equal the order");
    const std::size_t N = bases[d].size() - 1;
    if (N < static_cast<std::size_t>(dim.order))
      assembly_error(tag + ": N = " + std::to_string(N) + " is below the order v = " +
                     std::to_string(dim.order));

    const NodeSet& nodes = bases[d].nodes();
    const double tol = 1e-12 * std::max({1.0, std::abs(dim.a), std::abs(dim.b)});
    if (dim.initial_count > 0 && std::abs(nodes[0] - dim.a) > tol)
      assembly_error(tag + ": endpoint a is not a node; conditions at a need x_0 = a");
    if (dim.boundary_count > 0 && std::abs(nodes[N] - dim.b) > tol)
      assembly_error(tag + ": endpoint b is not a node; conditions at b need x_N = b");

    std::vector<Eigen::MatrixXd> mats;
    mats.push_back(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(N + 1),
                                             static_cast<Eigen::Index>(N + 1)));
    if (dim.order > 0)
      for (auto& m : dm_sequence(bases[d], dim.order)) mats.push_back(std::move(m.entries));
    impl->deriv.push_back(std::move(mats));
  }

  // Variable slots.
  const auto coords = coordinate_names(p);
  const auto aliases = coordinate_aliases(p);
  impl->slots = coords;
  for (const auto& [name, d] : aliases) {
    impl->slots.push_back(name);
    impl->alias_dims.push_back(d);
  }
  auto is_coordinate = [&](const std::string& name) {
    return std::find(impl->slots.begin(), impl->slots.end(), name) != impl->slots.end();
  };

  std::set<std::string> names = problem.residual.variables();
  for (const auto& v : problem.rhs.variables()) names.insert(v);
  std::set<std::string> unknowns;
  for (const auto& name : names) {
    if (is_coordinate(name)) continue;
    const auto orders = derivative_symbol(name, p);
    if (!orders) assembly_error("expression references unknown symbol '" + name + "'");
    for (std::size_t d = 0; d < p; ++d) {
      if ((*orders)[d] > problem.dims[d].order)
        assembly_error("symbol '" + name + "' exceeds the declared order in dimension " +
                       std::to_string(d + 1));
    }
    unknowns.insert(name);
    impl->slots.push_back(name);
    impl->symbols.push_back(*orders);
  }
  impl->lhs = expr::BoundExpr(problem.residual, impl->slots);
  impl->rhs = expr::BoundExpr(problem.rhs, impl->slots);
  impl->linear = problem.linear.value_or(expr::is_affine_in(problem.residual, unknowns) &&
                                         expr::is_affine_in(problem.rhs, unknowns));

  // Condition lookup and completeness.
  std::map<std::tuple<std::size_t, int, int>, const ConditionSpec*> lookup;
  for (const auto& c : problem.conditions) {
    if (c.dim >= p) assembly_error("condition on dimension " + std::to_string(c.dim + 1) +
                                   " but the problem has " + std::to_string(p));
    const DimensionSpec& dim = problem.dims[c.dim];
    const int count = c.side == Side::Initial ? dim.initial_count : dim.boundary_count;
    if (c.order < 0 || c.order >= count)
      assembly_error("condition of order " + std::to_string(c.order) + " on dimension " +
                     std::to_string(c.dim + 1) + " is not part of the declared split");
    for (const auto& v : c.value.variables()) {
      if (!is_coordinate(v))
        assembly_error("condition data may only depend on coordinates, found '" + v + "'");
    }
    const auto key = std::make_tuple(c.dim, c.side == Side::Initial ? 0 : 1, c.order);
    if (lookup.count(key)) assembly_error("duplicate condition on dimension " +
                                          std::to_string(c.dim + 1));
    lookup[key] = &c;
  }
  for (std::size_t d = 0; d < p; ++d) {
    for (int side = 0; side < 2; ++side) {
      const int count = side == 0 ? problem.dims[d].initial_count : problem.dims[d].boundary_count;
      for (int k = 0; k < count; ++k) {
        if (!lookup.count(std::make_tuple(d, side, k)))
          assembly_error(std::string("missing ") + (side == 0 ? "initial" : "boundary") +
                         " condition of order " + std::to_string(k) + " on dimension " +
                         std::to_string(d + 1));
      }
    }
  }

  // Classify grid points.
  std::vector<CollocationSystem::Impl::ConditionRow> initial_rows, boundary_rows;
  std::vector<double> values(impl->slots.size(), 0.0);
  for (std::size_t flat = 0; flat < impl->total; ++flat) {
    const auto idx = impl->unravel(flat);
    std::optional<std::size_t> owner;
    std::size_t faces = 0;
    for (std::size_t d = 0; d < p; ++d) {
      const auto v1 = static_cast<std::size_t>(problem.dims[d].initial_count);
      const auto v2 = static_cast<std::size_t>(problem.dims[d].boundary_count);
      if (idx[d] < v1 || idx[d] + v2 > impl->shape[d] - 1) {
        ++faces;
        if (!owner) owner = d;
      }
    }
    if (!owner) {
      impl->interior.push_back(flat);
      continue;
    }
    if (faces > 1) ++impl->overlaps;
    const std::size_t d = *owner;
    const auto v1 = static_cast<std::size_t>(problem.dims[d].initial_count);
    const bool at_a = idx[d] < v1;
    const std::size_t N = impl->shape[d] - 1;
    const int order = static_cast<int>(at_a ? idx[d] : N - idx[d]);
    const std::size_t face_index = at_a ? 0 : N;

    const ConditionSpec& spec = *lookup.at(std::make_tuple(d, at_a ? 0 : 1, order));
    impl->coordinates(flat, values);
    values[d] = bases[d].node(face_index);
    for (std::size_t a = 0; a < impl->alias_dims.size(); ++a)
      values[p + a] = values[impl->alias_dims[a]];
    const double g = expr::BoundExpr(spec.value, impl->slots)(values);
    (at_a ? initial_rows : boundary_rows).push_back({flat, d, face_index, order, g});
  }
  impl->conditions = initial_rows;
  impl->conditions.insert(impl->conditions.end(), boundary_rows.begin(), boundary_rows.end());

  for (std::size_t pt : impl->interior) {
    impl->roles.push_back(RowRole::Interior);
    impl->row_points.push_back(pt);
  }
  for (const auto& c : impl->conditions) {
    impl->roles.push_back(c.face_index == 0 ? RowRole::Initial : RowRole::Boundary);
    impl->row_points.push_back(c.point);
  }

  Eigen::VectorXd h(static_cast<Eigen::Index>(impl->interior.size()));
  impl->interior_residual(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(impl->total)), &h);
  impl->rhs_norm = max_abs(h);

  return CollocationSystem(std::move(impl));
}

CollocationSystem assemble_collocation_1d(const CollocationProblem& problem,
                                          const DlfBasis& basis) {
  if (problem.dims.size() != 1)
    assembly_error("assemble_collocation_1d needs a one-dimensional problem");
  return assemble_collocation_nd(problem, {basis});
}

namespace {

struct Factorization {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double condition;
};

Factorization factorize(const Eigen::MatrixXd& A) {
  Factorization f{Eigen::PartialPivLU<Eigen::MatrixXd>(A), 0.0};
  const double rcond = f.lu.rcond();
  f.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!std::isfinite(rcond) || rcond < 1e-14 || !A.allFinite()) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "collocation matrix is singular (condition estimate " << f.condition << ")";
    throw Error(ErrorKind::SingularMatrix, msg.str());
  }
  return f;
}

SolveReport measure(const CollocationSystem& system, const Eigen::VectorXd& u, SolveReport r) {
  const Eigen::VectorXd f = system.residual(u);
  const auto interior = static_cast<Eigen::Index>(system.interior_rows());
  r.residual_norm = max_abs(f);
  r.interior_residual = max_abs(f.head(interior));
  r.condition_residual = max_abs(f.tail(f.size() - interior));
  return r;
}

}  // namespace

SolveResult solve_system(const CollocationSystem& system, const SolveOptions& options) {
  const auto n = static_cast<Eigen::Index>(system.unknowns());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  if (options.initial_guess) {
    if (options.initial_guess->size() != system.unknowns())
      throw Error(ErrorKind::LengthMismatch, "initial guess has the wrong length");
    u = Eigen::Map<const Eigen::VectorXd>(options.initial_guess->data(), n);
  }

  SolveReport report;
  report.linear = system.linear();

  if (system.linear()) {
    const Eigen::MatrixXd A = system.linear_matrix();
    const Factorization f = factorize(A);
    report.condition_estimate = f.condition;
    u = f.lu.solve(-system.residual(Eigen::VectorXd::Zero(n)));
    // One step of iterative refinement against the assembled residual.
    u -= f.lu.solve(system.residual(u));
    report.iterations = 1;
  } else {
    Eigen::VectorXd f = system.residual(u);
    double norm = max_abs(f);
    int iter = 0;
    while (norm > options.tolerance) {
      if (iter == options.max_iterations) {
        std::ostringstream msg;
        msg.precision(3);
        msg << "Newton did not converge in " << iter << " iterations (final residual " << norm
            << ")";
        throw Error(ErrorKind::NewtonDivergence, msg.str());
      }
      const Factorization fac = factorize(system.jacobian(u, options.jacobian_step));
      report.condition_estimate = fac.condition;
      const Eigen::VectorXd step = fac.lu.solve(-f);
      double lambda = 1.0;
      Eigen::VectorXd trial = u + step;
      Eigen::VectorXd f_trial = system.residual(trial);
      for (int h = 0; h < options.max_halvings && !(max_abs(f_trial) < norm); ++h) {
        lambda *= 0.5;
        trial = u + lambda * step;
        f_trial = system.residual(trial);
      }
      u = std::move(trial);
      f = std::move(f_trial);
      norm = max_abs(f);
      ++iter;
      if (!std::isfinite(norm))
        throw Error(ErrorKind::NewtonDivergence, "Newton iterate became non-finite");
    }
    report.iterations = iter;
  }

  report = measure(system, u, report);
  std::vector<double> values(u.data(), u.data() + u.size());
  SolveResult result{
      system.dimension() == 1
          ? std::variant<Interpolant, TensorInterpolant>(Interpolant(system.bases()[0], values))
          : std::variant<Interpolant, TensorInterpolant>(TensorInterpolant(system.bases(), values)),
      values, report};
  return result;
}

}  // namespace dlf
