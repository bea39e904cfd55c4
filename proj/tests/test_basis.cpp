#include <cmath>
#include <numbers>

#include "dlf/basis.hpp"
#include "helpers.hpp"

using namespace dlf;
using dlf::testing::make_basis;
using dlf::testing::spec_of;

TEST_SUITE("basis") {
  TEST_CASE("family construction") {
    const PsiFamily id = make_psi_family(spec_of(PsiKind::Identity), 3);
    CHECK(id.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(id.value(i, 0.7) == 0.7);
    CHECK(id.homogeneous());
    CHECK_FALSE(id.limit_values());

    PsiSpec frac = spec_of(PsiKind::Fractional);
    frac.delta = 0.5;
    const PsiFamily f = make_psi_family(frac, 3);
    CHECK(f.value(2, 0.49) == doctest::Approx(0.7));

    PsiSpec rat = spec_of(PsiKind::Rational);
    rat.lengths = {1, 1, 1};
    const PsiFamily r = make_psi_family(rat, 3);
    CHECK(r.value(0, 3.0) == doctest::Approx(0.75));
    REQUIRE(r.limit_values());
    for (double beta : *r.limit_values()) CHECK(beta == 1.0);

    rat.variant = RationalVariant::Shifted;
    const PsiFamily r2 = make_psi_family(rat, 3);
    CHECK(r2.value(1, 3.0) == doctest::Approx(0.5));
    REQUIRE(r2.limit_values());
  }

  TEST_CASE("family parameter validation") {
    PsiSpec frac = spec_of(PsiKind::Fractional);
    frac.delta = 0.0;
    CHECK_ERROR_KIND(make_psi_family(frac, 3), ErrorKind::InvalidParameter);
    PsiSpec rat = spec_of(PsiKind::Rational);
    rat.lengths = {1, -1, 1};
    CHECK_ERROR_KIND(make_psi_family(rat, 3), ErrorKind::InvalidParameter);
    rat.lengths = {1, 1};
    CHECK_ERROR_KIND(make_psi_family(rat, 3), ErrorKind::InvalidParameter);
    PsiSpec mixed = spec_of(PsiKind::Mixed);
    mixed.split = 3;
    CHECK_ERROR_KIND(make_psi_family(mixed, 3), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(psi_kind_from_string("hermite"), ErrorKind::UnsupportedKind);
    CHECK(psi_kind_from_string("classical") == PsiKind::Identity);
  }

  TEST_CASE("closed-form derivative tables") {
    // Each family's derivatives against central differences of the value.
    for (const auto& inst : testing::all_kind_instances()) {
      const PsiFamily fam = make_psi_family(inst.spec, 9);
      const double x = 0.4 * inst.a + 0.6 * inst.b;
      for (std::size_t i : {std::size_t{0}, std::size_t{8}}) {
        for (int k = 1; k <= 3; ++k) {
          const double h = 1e-4;
          const double fd = (fam.derivative(i, k - 1, x + h) - fam.derivative(i, k - 1, x - h)) / (2 * h);
          CHECK_MESSAGE(std::abs(fam.derivative(i, k, x) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)),
                        inst.label << " i=" << i << " k=" << k);
        }
      }
    }
  }

  TEST_CASE("node generation") {
    const NodeSet c2 = generate_nodes(NodeScheme::ChebyshevGaussLobatto, 2, -1, 1);
    CHECK(c2[0] == -1.0);
    CHECK(std::abs(c2[1]) < 1e-16);
    CHECK(c2[2] == 1.0);
    const NodeSet e2 = generate_nodes(NodeScheme::Equispaced, 2, 0, 1);
    CHECK(e2[0] == 0.0);
    CHECK(e2[1] == 0.5);
    CHECK(e2[2] == 1.0);
    const NodeSet c4 = generate_nodes(NodeScheme::ChebyshevGaussLobatto, 4, -1, 1);
    CHECK(c4[1] == doctest::Approx(-std::cos(std::numbers::pi / 4)).epsilon(1e-15));
    CHECK(c4[3] == doctest::Approx(std::cos(std::numbers::pi / 4)).epsilon(1e-15));
    for (std::size_t k = 0; k <= 4; ++k)
      CHECK(c4[k] == doctest::Approx(-std::cos(k * std::numbers::pi / 4)).epsilon(1e-15));
    CHECK_ERROR_KIND(generate_nodes(NodeScheme::Equispaced, 0, 0, 1), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(generate_nodes(NodeScheme::Equispaced, 3, 1, 1), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(NodeSet(0, 1, {0.0, 0.5, 0.5}), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(NodeSet(0, 1, {0.0, 2.0}), ErrorKind::InvalidParameter);
  }

  TEST_CASE("basis validation") {
    CHECK_NOTHROW(validate_basis(make_psi_family(spec_of(PsiKind::Identity), 3),
                                 NodeSet(0, 1, {0.0, 0.5, 1.0})));
    PsiSpec sq = spec_of(PsiKind::Fractional);
    sq.delta = 2.0;
    try {
      validate_basis(make_psi_family(sq, 2), NodeSet(-1, 1, {-1.0, 1.0}));
      FAIL("expected separation-violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SeparationViolation);
      CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
    }
    try {
      validate_basis(make_psi_family(sq, 2), NodeSet(0, 1, {0.0, 1.0}));
      FAIL("expected degenerate-derivative");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateDerivative);
      CHECK(std::string(e.what()).find("0") != std::string::npos);
    }
    CHECK_ERROR_KIND(validate_basis(make_psi_family(spec_of(PsiKind::Identity), 4),
                                    NodeSet(0, 1, {0.0, 0.5, 1.0})),
                     ErrorKind::LengthMismatch);
    // Unbounded domains are reserved for the rational and exponential kinds.
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(validate_basis(make_psi_family(spec_of(PsiKind::Rational), 3),
                                 NodeSet(0, inf, {0.0, 1.0, 3.0})));
    CHECK_ERROR_KIND(validate_basis(make_psi_family(spec_of(PsiKind::Identity), 3),
                                    NodeSet(0, inf, {0.0, 1.0, 3.0})),
                     ErrorKind::DomainViolation);
  }

  TEST_CASE("weight and product form examples") {
    const DlfBasis sq = testing::square_basis();
    CHECK(weight_eval(sq, 3.0) == 40.0);
    CHECK(weight_eval(sq, 1.0) == 0.0);
    CHECK(weight_eval(sq, 2.0) == 0.0);
    const DlfBasis id = validate_basis(make_psi_family(spec_of(PsiKind::Identity), 2),
                                       NodeSet(0, 1, {0.0, 1.0}));
    CHECK(weight_eval(id, 0.5) == -0.25);
    CHECK(dlf_eval(sq, 0, 1.5) == doctest::Approx((4 - 2.25) / 3).epsilon(1e-15));
    CHECK(dlf_eval(sq, 1, 1.5) == doctest::Approx((2.25 - 1) / 3).epsilon(1e-15));
    CHECK_ERROR_KIND(dlf_eval(sq, 2, 1.5), ErrorKind::IndexOutOfRange);
    CHECK_ERROR_KIND(dlf_eval(sq, 0, 3.5), ErrorKind::DomainViolation);
    CHECK(sq.wprime()[0] == doctest::Approx(-6.0));
    CHECK(sq.wprime()[1] == doctest::Approx(12.0));
    CHECK(sq.wsecond()[0] == doctest::Approx(2.0));
  }

  TEST_CASE("Kronecker delta for every family kind") {
    for (const auto& inst : testing::all_kind_instances()) {
      const DlfBasis b = make_basis(inst, 8);
      double worst = 0.0;
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
          worst = std::max(worst, std::abs(dlf_eval(b, j, b.node(i)) - (i == j ? 1.0 : 0.0)));
      CHECK_MESSAGE(worst <= 1e-12, inst.label << ": " << worst);
    }
  }

  TEST_CASE("partition of unity for homogeneous families") {
    for (const auto& inst : testing::all_kind_instances()) {
      const DlfBasis b = make_basis(inst, 8);
      if (!b.psi().homogeneous()) continue;
      double worst = 0.0;
      for (double x : testing::uniform_points(100, inst.a, inst.b)) {
        double s = 0.0;
        for (double l : dlf_eval_all(b, x)) s += l;
        worst = std::max(worst, std::abs(s - 1.0));
      }
      CHECK_MESSAGE(worst <= 1e-10, inst.label << ": " << worst);
    }
  }

  TEST_CASE("heterogeneous families do not sum to one") {
    // psi_0 = x, psi_1 = x^2 on {0, 1}: L_0 + L_1 = 1 - x^2 + x.
    PsiSpec gen = spec_of(PsiKind::Mixed);
    gen.split = 3;
    const DlfBasis b = make_basis(gen, 8, 0.05, 1.2);
    CHECK_FALSE(b.psi().homogeneous());
    double s = 0.0;
    for (double l : dlf_eval_all(b, 0.3)) s += l;
    CHECK(std::abs(s - 1.0) > 1e-3);
  }

  TEST_CASE("product and weight forms agree away from nodes") {
    for (const auto& inst : testing::all_kind_instances()) {
      const DlfBasis b = make_basis(inst, 8);
      for (double x : testing::uniform_points(50, inst.a, inst.b, 3)) {
        bool near = false;
        for (double xn : b.nodes().values()) near = near || std::abs(x - xn) < 1e-6;
        if (near) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
          const double p = dlf_eval(b, j, x);
          const double w = dlf_eval_weight_form(b, j, x);
          CHECK_MESSAGE(std::abs(p - w) <= 1e-10 * std::max(1.0, std::abs(p)),
                        inst.label << " j=" << j << " x=" << x);
        }
      }
    }
  }

  TEST_CASE("rational functions approach their limits") {
    PsiSpec rat = spec_of(PsiKind::Rational);
    const double inf = std::numeric_limits<double>::infinity();
    const DlfBasis b =
        validate_basis(make_psi_family(rat, 7), NodeSet(0, inf, testing::rational_mapped_nodes(6)));
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto limit = dlf_limit(b, j);
      REQUIRE(limit);
      double previous = inf;
      for (int k = 3; k <= 6; ++k) {
        const double gap = std::abs(dlf_eval(b, j, std::pow(10.0, k)) - *limit);
        CHECK(gap <= previous);
        previous = gap;
      }
      CHECK(previous <= 1e-4);
    }
    CHECK_FALSE(dlf_limit(make_basis(spec_of(PsiKind::Identity), 4, -1, 1), 0));
  }

  TEST_CASE("identity family reproduces classical Lagrange polynomials") {
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 8, -1, 1);
    for (double x : testing::uniform_points(50, -1, 1, 11)) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        double l = 1.0;
        for (std::size_t i = 0; i < b.size(); ++i)
          if (i != j) l *= (x - b.node(i)) / (b.node(j) - b.node(i));
        CHECK(std::abs(dlf_eval(b, j, x) - l) <= 1e-12);
      }
    }
  }

  TEST_CASE("generalized family uses symbolic derivatives") {
    PsiSpec gen = spec_of(PsiKind::Generalized);
    gen.expression = "x + x^3";
    gen.expression_order = 3;
    const PsiFamily f = make_psi_family(gen, 3);
    CHECK(f.derivative(0, 1, 2.0) == 13.0);
    CHECK(f.derivative(0, 2, 2.0) == 12.0);
    CHECK(f.derivative(0, 3, 2.0) == 6.0);
    CHECK(f.max_derivative_order() == 3);
    gen.expression = "abs(x)";
    CHECK_ERROR_KIND(make_psi_family(gen, 3), ErrorKind::NotDifferentiable);
  }
}
