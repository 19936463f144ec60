#pragma once

// Primal density x(s) = (f*)'(sum_j mu_j a_j(s)) recovered from dual
// multipliers, with the moment-residual and duality-gap audit.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxent/dual.hpp"
#include "maxent/moments.hpp"

namespace maxent {

struct PrimalSolution {
  Eigen::VectorXd mu;
  ScalarMap x;
  Eigen::VectorXd x_at_nodes;
  Eigen::VectorXd moments;  // A x
  double moment_residual_inf = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  double max_pointwise_fy_gap = 0.0;  // max over nodes of f(x) + f*(v) - x v
  bool in_domain_closure = true;
};

inline PrimalSolution reconstruct(const ProblemInstance& inst, const Eigen::VectorXd& mu) {
  PrimalSolution sol;
  sol.mu = mu;
  sol.dual_value = dual_value(inst, mu);

  const Eigen::VectorXd v = inst.adjoint_at_nodes(mu);
  const auto& ent = inst.entropy;
  sol.x_at_nodes.resize(v.size());
  double primal = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double xi = ent.conjugate_d1(v[i]);
    sol.x_at_nodes[i] = xi;
    if (!ent.f_domain.closure_contains(xi)) sol.in_domain_closure = false;
    const double fx = ent.eval_f(xi);
    primal += inst.rule.weights[static_cast<std::size_t>(i)] * fx;
    sol.max_pointwise_fy_gap = std::max(sol.max_pointwise_fy_gap, fx + ent.f_star(v[i]) - xi * v[i]);
  }
  const Eigen::Map<const Eigen::VectorXd> w(inst.rule.weights.data(), v.size());
  sol.moments = inst.design.transpose() * w.cwiseProduct(sol.x_at_nodes);
  sol.moment_residual_inf = inf_norm(sol.moments - inst.b);
  sol.primal_value = primal;
  sol.duality_gap = primal - sol.dual_value;

  sol.x = [ent, basis = inst.basis, mu](double s) { return ent.f_star_d1(basis.combination(mu, s)); };
  return sol;
}

struct SamplePoint {
  double s;
  double x;
};

inline std::vector<SamplePoint> sample_solution(const PrimalSolution& sol, const std::vector<double>& grid) {
  std::vector<SamplePoint> out;
  out.reserve(grid.size());
  for (double s : grid) out.push_back({s, sol.x(s)});
  return out;
}

/// `count` equispaced points covering [lo, hi] including both ends.
inline std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> g;
  if (count <= 0) return g;
  if (count == 1) return {lo};
  g.reserve(static_cast<std::size_t>(count));
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) g.push_back(i + 1 == count ? hi : lo + i * h);
  return g;
}

inline constexpr int kOvershootGridPoints = 2001;

/// How far x leaves the range [inf target, sup target] inside [lo, hi].
template <typename X, typename T>
double gibbs_overshoot(X&& x, T&& target, double lo, double hi, int points = kOvershootGridPoints) {
  const auto grid = uniform_grid(lo, hi, std::max(points, kOvershootGridPoints));
  double tmin = kInf, tmax = -kInf;
  for (double s : grid) {
    const double t = target(s);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  double over = 0.0;
  for (double s : grid) {
    const double xs = x(s);
    over = std::max({over, xs - tmax, tmin - xs});
  }
  return over;
}

}  // namespace maxent
