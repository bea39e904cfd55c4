#include "dlf/diffmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dlf/error.hpp"

namespace dlf {

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

void require_order(const DlfBasis& basis, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidParameter, "derivative order must be >= 1");
  if (basis.psi().max_derivative_order() < m)
    throw Error(ErrorKind::InsufficientDerivativeOrder,
                "order " + std::to_string(m) + " needs psi derivatives up to " +
                    std::to_string(m) + ", family provides " +
                    std::to_string(basis.psi().max_derivative_order()));
}

// L_0..L_N at x without the domain check.
Eigen::VectorXd all_dlf(const DlfBasis& basis, double x) {
  const std::size_t n = basis.size();
  Eigen::VectorXd diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = basis.psi().value(i, x) - basis.anchor(i);
  Eigen::VectorXd out(n);
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

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
  double denominator;
};

// Fourth-order central stencils.
const Stencil& stencil(int m) {
  static const Stencil first{{-2, -1, 1, 2}, {1.0, -8.0, 8.0, -1.0}, 12.0};
  static const Stencil second{{-2, -1, 0, 1, 2}, {-1.0, 16.0, -30.0, 16.0, -1.0}, 12.0};
  static const Stencil third{{-3, -2, -1, 1, 2, 3}, {1.0, -8.0, 13.0, -13.0, 8.0, -1.0}, 8.0};
  return m == 1 ? first : m == 2 ? second : third;
}

Eigen::VectorXd central_difference(const DlfBasis& basis, int m, double x, double h) {
  const Stencil& s = stencil(m);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t p = 0; p < s.offsets.size(); ++p)
    acc += s.weights[p] * all_dlf(basis, x + s.offsets[p] * h);
  return acc / (s.denominator * std::pow(h, m));
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::Recurrence: return "recurrence";
    case Provenance::ClassicalPower: return "classical-power";
    case Provenance::FdOracle: return "fd-oracle";
  }
  return "?";
}

PStack make_pstack(const DlfBasis& basis, int m) {
  require_order(basis, m);
  const auto n = static_cast<Eigen::Index>(basis.size());
  PStack stack;
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i)
      d[i] = basis.own_derivative(static_cast<std::size_t>(i), k + 1);
    stack.diagonals.push_back(std::move(d));
  }
  stack.inverse = stack.diagonals.front().cwiseInverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(stack.diagonals.front()[i]) <= kSeparationTolerance)
      throw Error(ErrorKind::DegenerateDerivative,
                  "P is not invertible: psi_" + std::to_string(i) + "'(x_" + std::to_string(i) +
                      ") == 0");
  }
  return stack;
}

DiffMatrix d1_matrix(const DlfBasis& basis) {
  const std::size_t n = basis.size();
  const auto wp = basis.wprime();
  const auto ws = basis.wsecond();
  Eigen::MatrixXd d(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double p1 = basis.own_derivative(j, 1);
    const double p2 = basis.own_derivative(j, 2);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) {
        d(k, j) = ws[j] / (2.0 * wp[j]) - p2 / (2.0 * p1);
      } else {
        d(k, j) = (wp[k] / wp[j]) * p1 / basis.gap(j, k);
      }
    }
  }
  return {1, std::move(d), Provenance::ClosedForm};
}

std::vector<DiffMatrix> dm_sequence(const DlfBasis& basis, int m) {
  require_order(basis, m);
  std::vector<DiffMatrix> out;
  out.reserve(static_cast<std::size_t>(m));
  out.push_back(d1_matrix(basis));
  if (m == 1) return out;

  const PStack p = make_pstack(basis, m);
  const Eigen::MatrixXd& d1 = out.front().entries;
  const Eigen::MatrixXd right = p.inverse.asDiagonal() * d1;
  const auto n = d1.rows();

  // powers[r] = D^(r), r = 0..order-1
  std::vector<const Eigen::MatrixXd*> powers;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  powers.push_back(&identity);
  powers.push_back(&d1);

  for (int order = 2; order <= m; ++order) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k <= order - 1; ++k) {
      sum += binomial(order - 1, k) *
             (p.diagonals[static_cast<std::size_t>(k)].asDiagonal() *
              *powers[static_cast<std::size_t>(order - 1 - k)]);
    }
    out.push_back({order, sum * right, Provenance::Recurrence});
    powers.clear();
    powers.push_back(&identity);
    for (const auto& dm : out) powers.push_back(&dm.entries);
  }
  return out;
}

DiffMatrix dm_matrix(const DlfBasis& basis, int m) {
  auto seq = dm_sequence(basis, m);
  return std::move(seq.back());
}

DiffMatrix dm_power_classical(const DlfBasis& basis, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidParameter, "derivative order must be >= 1");
  DiffMatrix d1 = d1_matrix(basis);
  Eigen::MatrixXd result = d1.entries;
  for (int k = 2; k <= m; ++k) result = result * d1.entries;
  return {m, std::move(result), m == 1 ? Provenance::ClosedForm : Provenance::ClassicalPower};
}

DiffMatrix dm_oracle_fd(const DlfBasis& basis, int m, double step) {
  if (m < 1 || m > 3)
    throw Error(ErrorKind::InvalidParameter, "finite-difference oracle supports orders 1..3");
  if (!(step > 0.0) || !std::isfinite(step))
    throw Error(ErrorKind::InvalidParameter, "finite-difference step must be > 0");

  const std::size_t n = basis.size();
  const double relative = std::pow(step, 1.0 / m);
  Eigen::MatrixXd d(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = basis.node(k);
    double spacing = std::numeric_limits<double>::infinity();
    if (k > 0) spacing = std::min(spacing, x - basis.node(k - 1));
    if (k + 1 < n) spacing = std::min(spacing, basis.node(k + 1) - x);
    const double h = spacing * relative;

    const Eigen::VectorXd coarse = central_difference(basis, m, x, h);
    const Eigen::VectorXd fine = central_difference(basis, m, x, h / 2);
    const Eigen::VectorXd finer = central_difference(basis, m, x, h / 4);
    const Eigen::VectorXd level1 = (16.0 * fine - coarse) / 15.0;
    const Eigen::VectorXd level2 = (16.0 * finer - fine) / 15.0;

    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (!std::isfinite(level1[jj]) || !std::isfinite(level2[jj]))
        throw Error(ErrorKind::NonFinite, "finite-difference stencil left the family's domain at x_" +
                                              std::to_string(k));
      if (std::abs(level1[jj] - level2[jj]) > 1e-4 * std::max(1.0, std::abs(level1[jj])))
        throw Error(ErrorKind::StepTooSmall,
                    "Richardson levels disagree at entry (" + std::to_string(k) + ", " +
                        std::to_string(j) + "); the step is dominated by cancellation");
      d(static_cast<Eigen::Index>(k), jj) = level1[jj];
    }
  }
  return {m, std::move(d), Provenance::FdOracle};
}

double max_abs_diff(const DiffMatrix& a, const DiffMatrix& b) {
  if (a.entries.rows() != b.entries.rows() || a.entries.cols() != b.entries.cols())
    throw Error(ErrorKind::LengthMismatch, "matrix shapes differ");
  return (a.entries - b.entries).cwiseAbs().maxCoeff();
}

double max_abs_row_sum(const DiffMatrix& d) {
  return d.entries.rowwise().sum().cwiseAbs().maxCoeff();
}

std::string to_csv(const DiffMatrix& d) {
  std::string out;
  char buf[32];
  for (Eigen::Index r = 0; r < d.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < d.entries.cols(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.16e", d.entries(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dlf
