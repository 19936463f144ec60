#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "maxent/density.hpp"
#include "maxent/moments.hpp"
#include "maxent/quadrature.hpp"

using namespace maxent;

TEST(GaussLegendre, TwoPointRule) {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  EXPECT_NEAR(x[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(x[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(w[0], 1.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0, 1e-15);
}

TEST(Quadrature, QuarticExactOnSinglePanel) {
  const auto rule = build_rule(0.0, 1.0, {}, 5, 1);
  EXPECT_NEAR(integrate(rule, [](double s) { return s * s * s * s; }), 0.2, 1e-15);
}

TEST(Quadrature, PulseIntegralWithBreakpoint) {
  const auto rule = build_rule(0.0, 1.0, {0.5});
  const auto p = pulse(0.5);
  EXPECT_NEAR(integrate(rule, p.eval), 0.5, 1e-15);
  EXPECT_NEAR(integrate(rule, [&](double s) { return p(s) * s; }), 0.125, 1e-15);
}

TEST(Quadrature, PiecewiseFlatSecondFunction) {
  const auto rule = build_rule(0.0, 1.0, {0.5});
  const auto basis = piecewise_flat_basis(2, 0.5);
  // int_0^1/2 t dt + int_1/2^1 1 dt = 1/8 + 1/2.
  EXPECT_NEAR(integrate(rule, basis.functions[1]), 0.625, 1e-15);
}

TEST(Quadrature, TrivialIntegrands) {
  const auto rule = build_rule(0.0, 1.0, {});
  EXPECT_NEAR(integrate(rule, [](double) { return 1.0; }), 1.0, 4e-15);
  EXPECT_NEAR(integrate(rule, [](double s) { return s; }), 0.5, 4e-15);
}

TEST(Quadrature, NonFiniteIntegrandReportsNode) {
  const auto rule = build_rule(0.0, 1.0, {0.5}, 4, 2);
  try {
    integrate(rule, [](double s) { return s > 0.7 ? std::log(-1.0) : 1.0; });
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_GT(e.location(), 0.7);
    EXPECT_LT(e.location(), 1.0);
  }
}

TEST(Quadrature, RejectsBadBreakpointsAndOrders) {
  EXPECT_THROW(build_rule(0.0, 1.0, {0.6, 0.4}), ValidationError);
  EXPECT_THROW(build_rule(0.0, 1.0, {0.5, 0.5}), ValidationError);
  EXPECT_THROW(build_rule(0.0, 1.0, {1.0}), ValidationError);
  EXPECT_THROW(build_rule(0.0, 1.0, {-0.1}), ValidationError);
  EXPECT_THROW(build_rule(0.0, 1.0, {}, 0, 1), ValidationError);
  EXPECT_THROW(build_rule(0.0, 1.0, {}, 3, 0), ValidationError);
  EXPECT_THROW(build_rule(1.0, 1.0, {}), ValidationError);
}

TEST(Quadrature, WeightsSumAndNodesAvoidBreakpoints) {
  for (double tau : {0.3, 1.0, 7.5}) {
    const std::vector<double> bps{tau / 3, tau / 2};
    const auto rule = build_rule(0.0, tau, bps, 20, 8);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    EXPECT_NEAR(sum / tau, 1.0, 1e-12);
    for (double s : rule.nodes) {
      EXPECT_GT(s, 0.0);
      EXPECT_LT(s, tau);
      for (double b : bps) EXPECT_NE(s, b);
    }
    EXPECT_EQ(rule.size(), 3u * 8u * 20u);
  }
}

TEST(Quadrature, PolynomialExactnessUpToDegree2pMinus1) {
  for (int p = 1; p <= 12; ++p) {
    const auto rule = build_rule(0.25, 1.75, {}, p, 1);
    for (int deg = 0; deg <= 2 * p - 1; ++deg) {
      const double exact = (std::pow(1.75, deg + 1) - std::pow(0.25, deg + 1)) / (deg + 1);
      const double got = integrate(rule, [deg](double s) { return std::pow(s, deg); });
      EXPECT_LE(std::abs(got - exact) / std::abs(exact), 1e-12) << "p=" << p << " deg=" << deg;
    }
  }
}

TEST(Quadrature, RefinementStability) {
  const auto rule = build_rule(0.0, 1.0, {0.5});
  const auto fine = refine_rule(rule);
  const auto p = pulse(0.5);
  const auto mono = monomial_basis(6);
  const auto flat = piecewise_flat_basis(6, 0.5);
  std::vector<std::function<double(double)>> integrands;
  for (std::size_t k = 0; k < 6; ++k) {
    integrands.emplace_back([&, k](double s) { return mono.functions[k](s) * p(s); });
    integrands.emplace_back([&, k](double s) { return flat.functions[k](s) * flat.functions[5 - k](s); });
  }
  integrands.emplace_back([](double s) { return std::exp(3.0 - 40.0 * s + 60.0 * s * s - 25.0 * s * s * s); });
  integrands.emplace_back([](double s) { return std::log1p(std::exp(8.0 * s - 4.0)); });
  for (const auto& g : integrands) EXPECT_LE(std::abs(integrate(rule, g) - integrate(fine, g)), 1e-10);
}

TEST(Quadrature, RestrictAndAugment) {
  const auto rule = build_rule(0.0, 1.0, {0.5}, 6, 2);
  const auto sub = restrict_rule(rule, 0.25, 1.0);
  EXPECT_EQ(sub.breakpoints, std::vector<double>{0.5});
  EXPECT_EQ(sub.lo, 0.25);
  const std::vector<double> extra{0.1, 0.5, 0.9};
  const auto aug = with_breakpoints(rule, extra);
  EXPECT_EQ(aug.breakpoints, (std::vector<double>{0.1, 0.5, 0.9}));
}
