#pragma once

#include <span>
#include <vector>

#include "dlf/basis.hpp"

namespace dlf {

/// (a ⊗ b)[i |b| + j] = a_i b_j.
std::vector<double> kron_vec(std::span<const double> a, std::span<const double> b);

/// u_N(x) = sum_j U_j L_j(x). The coefficients are the nodal values.
class Interpolant {
 public:
  Interpolant(DlfBasis basis, std::vector<double> coeffs);

  const DlfBasis& basis() const { return basis_; }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator()(double x) const;

 private:
  DlfBasis basis_;
  std::vector<double> coeffs_;
};

/// p-dimensional tensor interpolant. Coefficients are ordered with the last
/// dimension varying fastest:
///   index(i_1, ..., i_p) = ((i_1 (N_2+1) + i_2) (N_3+1) + ...) + i_p.
class TensorInterpolant {
 public:
  TensorInterpolant(std::vector<DlfBasis> bases, std::vector<double> coeffs);

  std::size_t dimension() const { return bases_.size(); }
  const std::vector<DlfBasis>& bases() const { return bases_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::vector<std::size_t> shape() const;

  double operator()(std::span<const double> point) const;

 private:
  std::vector<DlfBasis> bases_;
  std::vector<double> coeffs_;
};

Interpolant interpolate_1d(const DlfBasis& basis, std::span<const double> samples);
double eval_interpolant(const Interpolant& interp, double x);

TensorInterpolant interpolate_nd(const std::vector<DlfBasis>& bases,
                                 std::span<const double> grid_values);
double eval_interpolant_nd(const TensorInterpolant& interp, std::span<const double> point);

/// Total grid size prod (N_i + 1).
std::size_t grid_size(const std::vector<DlfBasis>& bases);

}  // namespace dlf
