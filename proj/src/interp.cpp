#include "dlf/interp.hpp"

#include "dlf/error.hpp"

namespace dlf {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

std::vector<double> kron_vec(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double ai : a)
    for (double bj : b) out.push_back(ai * bj);
  return out;
}

std::size_t grid_size(const std::vector<DlfBasis>& bases) {
  std::size_t n = 1;
  for (const auto& b : bases) n *= b.size();
  return n;
}

Interpolant::Interpolant(DlfBasis basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis_.size())
    throw Error(ErrorKind::LengthMismatch, "interpolant needs " + std::to_string(basis_.size()) +
                                               " coefficients, got " +
                                               std::to_string(coeffs_.size()));
}

double Interpolant::operator()(double x) const {
  const std::vector<double> l = dlf_eval_all(basis_, x);
  return dot(coeffs_, l);
}

TensorInterpolant::TensorInterpolant(std::vector<DlfBasis> bases, std::vector<double> coeffs)
    : bases_(std::move(bases)), coeffs_(std::move(coeffs)) {
  if (bases_.empty())
    throw Error(ErrorKind::InvalidParameter, "tensor interpolant needs p >= 1 dimensions");
  if (coeffs_.size() != grid_size(bases_))
    throw Error(ErrorKind::LengthMismatch,
                "tensor interpolant needs " + std::to_string(grid_size(bases_)) +
                    " coefficients, got " + std::to_string(coeffs_.size()));
}

std::vector<std::size_t> TensorInterpolant::shape() const {
  std::vector<std::size_t> s;
  for (const auto& b : bases_) s.push_back(b.size());
  return s;
}

double TensorInterpolant::operator()(std::span<const double> point) const {
  if (point.size() != bases_.size())
    throw Error(ErrorKind::LengthMismatch, "point has " + std::to_string(point.size()) +
                                               " coordinates, interpolant has dimension " +
                                               std::to_string(bases_.size()));
  std::vector<double> chain = dlf_eval_all(bases_.front(), point[0]);
  for (std::size_t d = 1; d < bases_.size(); ++d)
    chain = kron_vec(chain, dlf_eval_all(bases_[d], point[d]));
  return dot(coeffs_, chain);
}

Interpolant interpolate_1d(const DlfBasis& basis, std::span<const double> samples) {
  return Interpolant(basis, std::vector<double>(samples.begin(), samples.end()));
}

double eval_interpolant(const Interpolant& interp, double x) { return interp(x); }

TensorInterpolant interpolate_nd(const std::vector<DlfBasis>& bases,
                                 std::span<const double> grid_values) {
  return TensorInterpolant(bases, std::vector<double>(grid_values.begin(), grid_values.end()));
}

double eval_interpolant_nd(const TensorInterpolant& interp, std::span<const double> point) {
  return interp(point);
}

}  // namespace dlf
