#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "dlf/diffmat.hpp"
#include "helpers.hpp"

using namespace dlf;
using dlf::testing::make_basis;
using dlf::testing::spec_of;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("diffmat") {
  TEST_CASE("first-order examples") {
    const DlfBasis id = validate_basis(make_psi_family(spec_of(PsiKind::Identity), 2),
                                       NodeSet(0, 1, {0.0, 1.0}));
    CHECK(max_diff(d1_matrix(id).entries, mat2(-1, 1, -1, 1)) < 1e-15);
    const DiffMatrix d1 = d1_matrix(testing::square_basis());
    CHECK(max_diff(d1.entries, mat2(-2.0 / 3, 2.0 / 3, -4.0 / 3, 4.0 / 3)) < 1e-14);
    CHECK(d1.provenance == Provenance::ClosedForm);
    CHECK(std::string(to_string(d1.provenance)) == "closed-form");
  }

  TEST_CASE("recurrence examples") {
    const DlfBasis sq = testing::square_basis();
    const PStack p = make_pstack(sq, 2);
    CHECK(p.diagonals[0][0] == 2.0);
    CHECK(p.diagonals[0][1] == 4.0);
    CHECK(p.diagonals[1][0] == 2.0);
    CHECK(p.diagonals[1][1] == 2.0);
    const DiffMatrix d2 = dm_matrix(sq, 2);
    CHECK(d2.provenance == Provenance::Recurrence);
    CHECK(max_diff(d2.entries, mat2(-2.0 / 3, 2.0 / 3, -2.0 / 3, 2.0 / 3)) < 1e-12);
    CHECK(max_diff(dm_matrix(sq, 1).entries, d1_matrix(sq).entries) == 0.0);
    const auto seq = dm_sequence(sq, 3);
    REQUIRE(seq.size() == 3);
    CHECK(max_diff(seq[1].entries, d2.entries) == 0.0);
    CHECK(seq[2].order == 3);
  }

  TEST_CASE("classical power examples") {
    const DlfBasis id = validate_basis(make_psi_family(spec_of(PsiKind::Identity), 2),
                                       NodeSet(0, 1, {0.0, 1.0}));
    CHECK(dm_power_classical(id, 2).entries.cwiseAbs().maxCoeff() == 0.0);
    const DlfBasis sq = testing::square_basis();
    const DiffMatrix p2 = dm_power_classical(sq, 2);
    CHECK(p2.provenance == Provenance::ClassicalPower);
    CHECK(max_diff(p2.entries, mat2(-4.0 / 9, 4.0 / 9, -8.0 / 9, 8.0 / 9)) < 1e-14);
    CHECK(max_diff(dm_power_classical(sq, 1).entries, d1_matrix(sq).entries) == 0.0);
  }

  TEST_CASE("non-commutation witness") {
    const DlfBasis sq = testing::square_basis();
    CHECK(max_abs_diff(dm_matrix(sq, 2), dm_power_classical(sq, 2)) >= 0.2);
  }

  TEST_CASE("oracle examples") {
    const DlfBasis sq = testing::square_basis();
    CHECK(max_abs_diff(dm_oracle_fd(sq, 1), d1_matrix(sq)) < 1e-8);
    CHECK(max_abs_diff(dm_oracle_fd(sq, 2), dm_matrix(sq, 2)) < 1e-6);
    const DlfBasis id = make_basis(spec_of(PsiKind::Identity), 6, -1, 1);
    CHECK(max_abs_diff(dm_oracle_fd(id, 2), dm_power_classical(id, 2)) < 1e-6);
    CHECK(dm_oracle_fd(sq, 1).provenance == Provenance::FdOracle);
    CHECK_ERROR_KIND(dm_oracle_fd(sq, 4), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(dm_oracle_fd(sq, 1, 0.0), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(dm_oracle_fd(id, 3, 1e-14), ErrorKind::StepTooSmall);
  }

  TEST_CASE("row sums vanish for homogeneous families") {
    for (const auto& inst : testing::all_kind_instances()) {
      const DlfBasis b = make_basis(inst, 8);
      if (!b.psi().homogeneous()) continue;
      for (int m = 1; m <= 3; ++m) {
        const DiffMatrix d = dm_matrix(b, m);
        const double scale = std::max(1.0, d.entries.cwiseAbs().maxCoeff());
        CHECK_MESSAGE(max_abs_row_sum(d) <= 1e-9 * scale, inst.label << " m=" << m);
        CHECK(max_abs_row_sum(dm_power_classical(b, m)) <= 1e-9 * scale);
        if (m <= 3) {
          const DiffMatrix fd = dm_oracle_fd(b, m);
          CHECK(max_abs_row_sum(fd) <= 1e-5 * scale);
        }
      }
    }
  }

  TEST_CASE("homogeneous exactness of the recurrence") {
    for (const auto& inst : testing::oracle_instances()) {
      const DlfBasis b = make_basis(inst, 8);
      CHECK_MESSAGE(max_abs_diff(d1_matrix(b), dm_oracle_fd(b, 1)) < 1e-8, inst.label);
      for (int m = 2; m <= 3; ++m)
        CHECK_MESSAGE(max_abs_diff(dm_matrix(b, m), dm_oracle_fd(b, m)) < 1e-5,
                      inst.label << " m=" << m);
    }
    for (const auto& inst : testing::all_kind_instances()) {
      const DlfBasis b = make_basis(inst, 8);
      if (!b.psi().homogeneous()) continue;
      for (int m = 1; m <= 3; ++m) {
        const DiffMatrix d = dm_matrix(b, m);
        const double scale = std::max(1.0, d.entries.cwiseAbs().maxCoeff());
        CHECK_MESSAGE(max_abs_diff(d, dm_oracle_fd(b, m)) < 1e-5 * scale, inst.label << " m=" << m);
      }
    }
  }

  TEST_CASE("identity family degenerates to matrix powers") {
    for (std::size_t N : {8u, 16u}) {
      const DlfBasis b = make_basis(spec_of(PsiKind::Identity), N, -1, 1);
      for (int m = 2; m <= 3; ++m)
        CHECK(max_abs_diff(dm_matrix(b, m), dm_power_classical(b, m)) <= 1e-9);
    }
  }

  TEST_CASE("heterogeneous recurrence gap is measured and reported") {
    PsiSpec mixed = spec_of(PsiKind::Mixed);
    mixed.split = 3;
    const DlfBasis b = make_basis(mixed, 8, 0.05, 1.2);
    const double gap2 = max_abs_diff(dm_matrix(b, 2), dm_oracle_fd(b, 2));
    const double gap1 = max_abs_diff(d1_matrix(b), dm_oracle_fd(b, 1));
    const double rows = max_abs_row_sum(d1_matrix(b));
    CHECK(std::isfinite(gap2));
    CHECK(gap1 < 1e-6);
    std::filesystem::create_directories("reports");
    std::ofstream out("reports/heterogeneous_recurrence.csv");
    out << "family,N,d1_vs_oracle,d2_vs_oracle,d1_max_row_sum\n";
    out << "mixed(split 3)," << 8 << ',' << gap1 << ',' << gap2 << ',' << rows << '\n';
    MESSAGE("mixed family: |D2 - oracle| = " << gap2 << ", D1 row sums up to " << rows);
  }

  TEST_CASE("insufficient derivative order") {
    PsiSpec gen = spec_of(PsiKind::Generalized);
    gen.expression = "x + x^3";
    gen.expression_order = 2;
    const DlfBasis b = make_basis(gen, 4, 0, 1);
    CHECK_NOTHROW(d1_matrix(b));
    CHECK_NOTHROW(dm_matrix(b, 2));
    CHECK_ERROR_KIND(dm_matrix(b, 3), ErrorKind::InsufficientDerivativeOrder);
    CHECK_ERROR_KIND(dm_matrix(b, 0), ErrorKind::InvalidParameter);
  }

  TEST_CASE("csv serialization") {
    const DlfBasis b = make_basis(spec_of(PsiKind::Identity), 8, -1, 1);
    const std::string csv = to_csv(dm_matrix(b, 2));
    std::size_t lines = 0, commas = 0;
    for (char c : csv) {
      lines += c == '\n';
      commas += c == ',';
    }
    CHECK(lines == 9);
    CHECK(commas == 9 * 8);
    const std::regex entry(R"(-?[0-9]\.[0-9]{16}e[+-][0-9]{2,3})");
    std::stringstream rows(csv);
    std::string line, cell;
    while (std::getline(rows, line)) {
      std::stringstream cells(line);
      while (std::getline(cells, cell, ',')) CHECK_MESSAGE(std::regex_match(cell, entry), cell);
    }
  }
}
