#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dlf/basis.hpp"

namespace dlf::testing {

/// A shipped family instance with a domain on which it is admissible.
struct Instance {
  std::string label;
  PsiSpec spec;
  double a;
  double b;
};

inline PsiSpec spec_of(PsiKind kind) {
  PsiSpec s;
  s.kind = kind;
  return s;
}

/// One instance per family kind, used by the property suites and the
/// acceptance runner.
inline std::vector<Instance> all_kind_instances() {
  std::vector<Instance> out;
  out.push_back({"identity", spec_of(PsiKind::Identity), -1.0, 1.0});
  PsiSpec frac = spec_of(PsiKind::Fractional);
  frac.delta = 0.5;
  out.push_back({"fractional(0.5)", frac, 0.1, 2.0});
  PsiSpec gen = spec_of(PsiKind::Generalized);
  gen.expression = "tanh(x)";
  out.push_back({"generalized(tanh)", gen, -1.0, 1.0});
  out.push_back({"rational(x/(x+1))", spec_of(PsiKind::Rational), 0.0, 4.0});
  out.push_back({"exponential", spec_of(PsiKind::Exponential), -1.0, 1.0});
  out.push_back({"fourier-sin", spec_of(PsiKind::FourierSin), -1.2, 1.2});
  out.push_back({"fourier-cos", spec_of(PsiKind::FourierCos), 0.2, 3.0});
  PsiSpec mixed = spec_of(PsiKind::Mixed);
  mixed.split = 3;
  out.push_back({"mixed(split 3)", mixed, 0.05, 1.2});
  return out;
}

/// The families used for operational-matrix checks against the oracle.
inline std::vector<Instance> oracle_instances() {
  std::vector<Instance> out;
  out.push_back({"identity", spec_of(PsiKind::Identity), -1.0, 1.0});
  PsiSpec frac = spec_of(PsiKind::Fractional);
  frac.delta = 2.0;
  out.push_back({"fractional(2)", frac, 2.0, 4.0});
  PsiSpec rat = spec_of(PsiKind::Rational);
  rat.length = 4.0;
  out.push_back({"rational(x/(x+4))", rat, 0.0, 2.0});
  PsiSpec ex = spec_of(PsiKind::Exponential);
  ex.rate = 0.5;
  out.push_back({"exponential(0.5)", ex, -1.0, 1.0});
  return out;
}

inline DlfBasis make_basis(const PsiSpec& spec, std::size_t N, double a, double b,
                           NodeScheme scheme = NodeScheme::ChebyshevGaussLobatto) {
  return validate_basis(make_psi_family(spec, N + 1), generate_nodes(scheme, N, a, b));
}

inline DlfBasis make_basis(const Instance& inst, std::size_t N) {
  return make_basis(inst.spec, N, inst.a, inst.b);
}

/// psi_i(x) = x^2 on nodes {1, 2}, the hand-worked instance.
inline DlfBasis square_basis() {
  PsiSpec s = spec_of(PsiKind::Fractional);
  s.delta = 2.0;
  return validate_basis(make_psi_family(s, 2), NodeSet(1.0, 3.0, {1.0, 2.0}));
}

/// Nodes x = L t / (1 - t) for t on Chebyshev points of [0, top], so that
/// x / (x + L) is spread up to `top`.
inline std::vector<double> rational_mapped_nodes(std::size_t N, double length = 1.0,
                                                 double top = 0.99) {
  std::vector<double> x(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    const double t = 0.5 * top * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) /
                                                 static_cast<double>(N)));
    x[k] = length * t / (1.0 - t);
  }
  return x;
}

inline std::vector<double> uniform_points(std::size_t count, double a, double b,
                                          unsigned seed = 20240611) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(a, b);
  std::vector<double> xs(count);
  for (auto& x : xs) x = dist(rng);
  return xs;
}

}  // namespace dlf::testing
