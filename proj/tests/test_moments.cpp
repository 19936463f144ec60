#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "maxent/density.hpp"
#include "maxent/entropy.hpp"
#include "maxent/moments.hpp"

using namespace maxent;

namespace {

QuadratureRule unit_rule(std::vector<double> bps = {0.5}) { return build_rule(0.0, 1.0, bps); }

void expect_matrix_near(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << a << "\nvs\n" << b;
}

}  // namespace

TEST(MonomialBasis, SingleFunctionIsOne) {
  const auto b = monomial_basis(1);
  EXPECT_EQ(b.size(), 1u);
  EXPECT_EQ(b.functions[0](0.3), 1.0);
  expect_matrix_near(gram_matrix(b, unit_rule()), Eigen::MatrixXd::Ones(1, 1), 1e-15);
}

TEST(MonomialBasis, HilbertGram) {
  const auto g = gram_matrix(monomial_basis(3), unit_rule());
  Eigen::MatrixXd h(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = 1.0 / (i + j + 1);
  expect_matrix_near(g, h, 1e-14);
}

TEST(MonomialBasis, SmallestEigenvalueTwoByTwo) {
  const auto r = linearly_independent_on(monomial_basis(2), unit_rule(), 0.0, 1.0);
  const double oracle = (1.0 + 1.0 / 3.0) / 2.0 - std::sqrt(std::pow(1.0 - 1.0 / 3.0, 2) / 4.0 + 0.25);
  EXPECT_NEAR(r.min_eigenvalue, oracle, 1e-14);
  EXPECT_NEAR(r.min_eigenvalue, 0.0657, 1e-4);
  EXPECT_TRUE(r.independent);
}

TEST(MonomialBasis, SupBoundAndValidation) {
  EXPECT_EQ(monomial_basis(4, 0.0, 2.0).sup_bound, 8.0);
  EXPECT_EQ(monomial_basis(4, 0.0, 0.5).sup_bound, 1.0);
  EXPECT_TRUE(monomial_basis(4).breakpoints.empty());
  EXPECT_THROW(monomial_basis(0), ValidationError);
}

TEST(PiecewiseFlatBasis, Branches) {
  const auto b = piecewise_flat_basis(3, 0.5);
  EXPECT_EQ(b.breakpoints, std::vector<double>{0.5});
  EXPECT_DOUBLE_EQ(b.functions[2](0.25), 0.0625);
  EXPECT_DOUBLE_EQ(b.functions[2](0.75), 1.0);
  const auto one = piecewise_flat_basis(1, 0.5);
  EXPECT_EQ(one.functions[0](0.2), 1.0);
  EXPECT_EQ(one.functions[0](0.8), 1.0);
}

TEST(PiecewiseFlatBasis, JumpAtSplit) {
  const auto b = piecewise_flat_basis(2, 0.5);
  const double left = b.functions[1](0.5);
  const double right = b.functions[1](std::nextafter(0.5, 1.0));
  EXPECT_DOUBLE_EQ(right - left, 0.5);
}

TEST(PiecewiseFlatBasis, RejectsSplitOutsideInterval) {
  EXPECT_THROW(piecewise_flat_basis(2, 0.0), ValidationError);
  EXPECT_THROW(piecewise_flat_basis(2, 1.0), ValidationError);
  EXPECT_THROW(piecewise_flat_basis(2, 1.5), ValidationError);
}

TEST(ApplyA, PulseMomentsForBothBases) {
  const Eigen::Vector3d expected(0.5, 0.125, 1.0 / 24.0);
  const auto p = pulse(0.5);
  for (const auto& basis : {monomial_basis(3), piecewise_flat_basis(3, 0.5)}) {
    const auto b = apply_A(basis, unit_rule(), p.eval);
    EXPECT_LE((b - expected).cwiseAbs().maxCoeff(), 1e-15) << to_string(basis.kind);
  }
  EXPECT_EQ(apply_A(monomial_basis(4), unit_rule(), [](double) { return 0.0; }), Eigen::VectorXd::Zero(4));
}

TEST(ApplyA, Linear) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto basis = piecewise_flat_basis(5, 0.5);
  const auto rule = unit_rule();
  for (int trial = 0; trial < 20; ++trial) {
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng), lambda = u(rng);
    auto x = [=](double s) { return c1 + c2 * std::sin(3 * s); };
    auto y = [=](double s) { return std::exp(c3 * s); };
    const Eigen::VectorXd lhs = apply_A(basis, rule, [&](double s) { return x(s) + lambda * y(s); });
    const Eigen::VectorXd rhs = apply_A(basis, rule, x) + lambda * apply_A(basis, rule, y);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyA, NonFiniteDensity) {
  EXPECT_THROW(apply_A(monomial_basis(2), unit_rule(), [](double s) { return 1.0 / (s - s); }), NonFiniteError);
}

TEST(GramMatrix, SubintervalExamples) {
  Eigen::Matrix2d half;
  half << 0.5, 0.125, 0.125, 1.0 / 24.0;
  expect_matrix_near(gram_matrix(monomial_basis(2), unit_rule(), 0.0, 0.5), half, 1e-15);
  expect_matrix_near(gram_matrix(piecewise_flat_basis(2, 0.5), unit_rule(), 0.5, 1.0),
                     Eigen::Matrix2d::Constant(0.5), 1e-15);
  EXPECT_THROW(gram_matrix(monomial_basis(2), unit_rule(), 0.5, 0.5), ValidationError);
  EXPECT_THROW(gram_matrix(monomial_basis(2), unit_rule(), 0.5, 1.5), ValidationError);
}

TEST(GramMatrix, SymmetricPsd) {
  const auto rule = unit_rule();
  for (const auto& basis : {monomial_basis(6), piecewise_flat_basis(6, 0.5)}) {
    for (auto [lo, hi] : {std::pair{0.0, 1.0}, {0.0, 0.5}, {0.5, 1.0}, {0.1, 0.3}, {0.4, 0.9}}) {
      const auto g = gram_matrix(basis, rule, lo, hi);
      EXPECT_EQ(g, g.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
  }
}

TEST(Independence, Examples) {
  const auto rule = unit_rule();
  EXPECT_TRUE(linearly_independent_on(monomial_basis(4), rule, 0.0, 0.5).independent);
  const auto dep = linearly_independent_on(piecewise_flat_basis(2, 0.5), rule, 0.5, 1.0);
  EXPECT_FALSE(dep.independent);
  EXPECT_NEAR(dep.min_eigenvalue, 0.0, 1e-15);
  EXPECT_TRUE(linearly_independent_on(piecewise_flat_basis(1, 0.5), rule, 0.5, 1.0).independent);
  EXPECT_THROW(linearly_independent_on(monomial_basis(2), rule, 0.0, 1.0, 0.0), ValidationError);
}

TEST(Independence, PiecewiseFlatLocalOnly) {
  const auto rule = unit_rule();
  for (int n = 1; n <= 6; ++n) {
    const auto basis = piecewise_flat_basis(n, 0.5);
    for (double z2 : {0.05, 0.2, 0.35, 0.5}) {
      EXPECT_TRUE(linearly_independent_on(basis, rule, 0.0, z2).independent) << "n=" << n << " z2=" << z2;
    }
    if (n >= 2) {
      EXPECT_FALSE(linearly_independent_on(basis, rule, 0.5, 1.0).independent) << "n=" << n;
    }
  }
}

TEST(TabulatedBasis, ReadsColumnsAndBreakpoints) {
  std::istringstream in(
      "# breakpoints: 0.5\n"
      "0, 1, 0\n"
      "0.5, 1, 0.5\n"
      "1, 1, 1\n");
  const auto table = read_table(in);
  const auto basis = tabulated_basis(table, 0.0, 1.0);
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_EQ(basis.breakpoints, std::vector<double>{0.5});
  EXPECT_DOUBLE_EQ(basis.functions[1](0.25), 0.25);
  const auto b = apply_A(basis, unit_rule(), pulse(0.5).eval);
  EXPECT_NEAR(b[0], 0.5, 1e-15);
  EXPECT_NEAR(b[1], 0.125, 1e-15);
}

TEST(TabulatedBasis, RejectsMalformedTables) {
  std::istringstream ragged("0 1 2\n1 1\n");
  EXPECT_THROW(read_table(ragged), ValidationError);
  std::istringstream junk("0 abc\n1 2\n");
  EXPECT_THROW(read_table(junk), ValidationError);
  std::istringstream single("0 1\n");
  EXPECT_THROW(read_table(single), ValidationError);
}

TEST(ProblemInstance, Validation) {
  const auto ent = builtin_entropy("l2_norm");
  const auto basis = piecewise_flat_basis(2, 0.5);
  EXPECT_THROW(make_instance(ent, basis, build_rule(0.0, 1.0, {}), Eigen::Vector2d(1, 1)), ValidationError);
  EXPECT_THROW(make_instance(ent, basis, unit_rule(), Eigen::Vector3d(1, 1, 1)), ValidationError);
  EXPECT_THROW(make_instance(ent, basis, unit_rule(), Eigen::Vector2d(1, NAN)), ValidationError);
  const auto inst = make_instance(ent, basis, unit_rule(), Eigen::Vector2d(0.5, 0.625));
  EXPECT_EQ(inst.n(), 2u);
  EXPECT_EQ(inst.design.rows(), static_cast<Eigen::Index>(inst.rule.size()));
}

TEST(Independence, InvariantUnderRescalingFunctions) {
  const auto rule = build_rule(0.0, 4.0, {});
  auto basis = monomial_basis(5, 0.0, 4.0);
  const auto before = linearly_independent_on(basis, rule, 0.0, 0.1);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto f = basis.functions[k];
    basis.functions[k] = [f, k](double s) { return std::pow(1e3, static_cast<double>(k)) * f(s); };
  }
  const auto after = linearly_independent_on(basis, rule, 0.0, 0.1);
  EXPECT_TRUE(before.independent);
  EXPECT_EQ(before.independent, after.independent);
  EXPECT_NEAR(before.scaled_min_eigenvalue, after.scaled_min_eigenvalue, 1e-9);
}

TEST(Independence, VanishingFunctionIsDependent) {
  const auto rule = unit_rule();
  MomentBasis basis = monomial_basis(2);
  basis.functions[1] = [](double s) { return s > 0.5 ? s : 0.0; };
  EXPECT_FALSE(linearly_independent_on(basis, rule, 0.0, 0.5).independent);
  EXPECT_TRUE(linearly_independent_on(basis, rule, 0.0, 1.0).independent);
}
