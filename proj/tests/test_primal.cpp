#include <gtest/gtest.h>

#include <cmath>

#include "maxent/density.hpp"
#include "maxent/primal.hpp"

using namespace maxent;

namespace {

ProblemInstance single_constraint(const std::string& entropy, double b1) {
  return make_instance(builtin_entropy(entropy), monomial_basis(1), build_rule(0.0, 1.0, {}),
                       Eigen::VectorXd::Constant(1, b1));
}

}  // namespace

TEST(Reconstruct, L2Constant) {
  const auto sol = reconstruct(single_constraint("l2_norm", 0.5), Eigen::VectorXd::Constant(1, 0.5));
  EXPECT_DOUBLE_EQ(sol.x(0.3), 0.5);
  EXPECT_NEAR(sol.primal_value, 0.125, 1e-15);
  EXPECT_NEAR(sol.duality_gap, 0.0, 1e-15);
  EXPECT_NEAR(sol.moment_residual_inf, 0.0, 1e-15);
}

TEST(Reconstruct, TranslatedBoltzmannShannonConstant) {
  const auto sol =
      reconstruct(single_constraint("translated_boltzmann_shannon", 0.5), Eigen::VectorXd::Constant(1, std::log(0.5)));
  EXPECT_NEAR(sol.x(0.9), 0.5, 1e-15);
  EXPECT_NEAR(sol.primal_value, 0.5 * std::log(0.5) - 0.5, 1e-15);
  EXPECT_NEAR(sol.duality_gap, 0.0, 1e-15);
}

TEST(Reconstruct, ConvergedBenchmarksAudit) {
  const auto ent = builtin_entropy("translated_boltzmann_shannon");
  for (int n : {2, 4, 6}) {
    for (const auto& basis : {monomial_basis(n), piecewise_flat_basis(n, 0.5)}) {
      const auto inst = instance_from_density(ent, basis, pulse(0.5));
      const auto dual = solve_dual(inst);
      ASSERT_TRUE(dual.converged);
      const auto sol = reconstruct(inst, dual.mu);
      EXPECT_LE(sol.moment_residual_inf, 10 * 1e-10);
      EXPECT_LE(std::abs(sol.duality_gap), 1e-8);
      EXPECT_LE(sol.max_pointwise_fy_gap, 1e-8);
      EXPECT_TRUE(sol.in_domain_closure);
      EXPECT_NEAR(sol.dual_value, dual.dual_value, 1e-15);
      for (int i = 0; i < sol.x_at_nodes.size(); ++i) EXPECT_GT(sol.x_at_nodes[i], 0.0);
      // Weak duality against the pulse itself, which is feasible by construction.
      const double pulse_entropy = integrate(inst.rule, [&](double s) { return ent.eval_f(pulse(0.5)(s)); });
      EXPECT_GE(pulse_entropy, sol.dual_value - 1e-8);
    }
  }
}

TEST(Reconstruct, FermiDiracStaysInUnitInterval) {
  const auto inst = instance_from_density(builtin_entropy("fermi_dirac"), monomial_basis(3), constant_density(0.3));
  const auto dual = solve_dual(inst);
  ASSERT_TRUE(dual.converged);
  const auto sol = reconstruct(inst, dual.mu);
  EXPECT_TRUE(sol.in_domain_closure);
  EXPECT_NEAR(sol.x(0.5), 0.3, 1e-9);
}

TEST(WeakDuality, ArbitraryMultipliers) {
  const auto ent = builtin_entropy("translated_boltzmann_shannon");
  const auto inst = instance_from_density(ent, monomial_basis(3), pulse(0.5));
  const double pulse_entropy = integrate(inst.rule, [&](double s) { return ent.eval_f(pulse(0.5)(s)); });
  for (const Eigen::Vector3d& phi : {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, -2, 3), Eigen::Vector3d(-5, 4, 0.5)}) {
    EXPECT_GE(pulse_entropy, dual_value(inst, phi) - 1e-8);
  }
}

TEST(SampleSolution, Tables) {
  const auto sol = reconstruct(single_constraint("l2_norm", 0.5), Eigen::VectorXd::Constant(1, 0.5));
  EXPECT_TRUE(sample_solution(sol, {}).empty());
  const auto grid = uniform_grid(0.0, 1.0, 1001);
  ASSERT_EQ(grid.size(), 1001u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  for (const auto& p : sample_solution(sol, grid)) EXPECT_DOUBLE_EQ(p.x, 0.5);

  const auto inst = instance_from_density(builtin_entropy("translated_boltzmann_shannon"), monomial_basis(6), pulse(0.5));
  const auto pulse_sol = reconstruct(inst, solve_dual(inst).mu);
  for (const auto& p : sample_solution(pulse_sol, grid)) EXPECT_TRUE(std::isfinite(p.x));
}

TEST(GibbsOvershoot, Examples) {
  const auto p = pulse(0.5);
  EXPECT_EQ(gibbs_overshoot(p.eval, p.eval, 0.0, 1.0), 0.0);
  EXPECT_NEAR(gibbs_overshoot([&](double s) { return 1.2 * p(s); }, p.eval, 0.2, 0.3), 0.2, 1e-15);
  EXPECT_NEAR(gibbs_overshoot([](double) { return -0.1; }, p.eval, 0.4, 0.6), 0.1, 1e-15);
}

TEST(GibbsOvershoot, PiecewiseTamesMonomial) {
  const auto ent = builtin_entropy("translated_boltzmann_shannon");
  double over[2];
  int i = 0;
  for (const auto& basis : {monomial_basis(6), piecewise_flat_basis(6, 0.5)}) {
    const auto inst = instance_from_density(ent, basis, pulse(0.5));
    const auto dual = solve_dual(inst);
    ASSERT_TRUE(dual.converged);
    over[i++] = gibbs_overshoot(reconstruct(inst, dual.mu).x, pulse(0.5).eval, 0.4, 0.6);
  }
  EXPECT_LT(over[1], over[0]);
}
