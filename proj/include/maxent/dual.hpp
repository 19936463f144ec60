#pragma once

// The finite dual of min { I_f(x) : Ax = b }:
//
//   D(phi) = <phi, b> - integral f*(sum_k phi_k a_k(s)) ds,
//
// maximized by damped Newton ascent. Stationarity of D is the moment system
// b_k = integral (f*)'(sum_j mu_j a_j) a_k.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maxent/errors.hpp"
#include "maxent/moments.hpp"

namespace maxent {

struct TraceEntry {
  int iter = 0;
  double residual_inf = 0.0;
  double step = 0.0;
  double dual_value = 0.0;
};

struct DualSolution {
  Eigen::VectorXd mu;
  double residual_inf = kInf;
  double dual_value = -kInf;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  bool converged = false;
  std::string message;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 100;
  std::optional<Eigen::VectorXd> phi0;
};

namespace detail {

// Conjugate argument at node i, rethrowing domain errors with the node location.
inline void check_conjugate_domain(const ProblemInstance& inst, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!inst.entropy.f_star_domain.contains(v[i])) {
      const double s = inst.rule.nodes[static_cast<std::size_t>(i)];
      throw DomainError(inst.entropy.name + ": A^T phi = " + std::to_string(v[i]) + " at node s=" +
                            std::to_string(s) + " lies outside the conjugate domain " +
                            inst.entropy.f_star_domain.str(),
                        s);
    }
  }
}

inline void check_phi(const ProblemInstance& inst, const Eigen::VectorXd& phi) {
  if (static_cast<std::size_t>(phi.size()) != inst.n()) {
    throw ValidationError("multiplier vector length does not match basis size");
  }
}

// Weighted sum with a finiteness check per node.
template <typename F>
double node_sum(const ProblemInstance& inst, const Eigen::VectorXd& v, F&& g) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double gi = g(v[i]);
    if (!std::isfinite(gi)) {
      const double s = inst.rule.nodes[static_cast<std::size_t>(i)];
      throw NonFiniteError("integrand not finite at node s=" + std::to_string(s), s);
    }
    sum += inst.rule.weights[static_cast<std::size_t>(i)] * gi;
  }
  return sum;
}

}  // namespace detail

inline double dual_value(const ProblemInstance& inst, const Eigen::VectorXd& phi) {
  detail::check_phi(inst, phi);
  const Eigen::VectorXd v = inst.adjoint_at_nodes(phi);
  detail::check_conjugate_domain(inst, v);
  const auto& fs = inst.entropy.f_star;
  return phi.dot(inst.b) - detail::node_sum(inst, v, fs);
}

inline Eigen::VectorXd dual_gradient(const ProblemInstance& inst, const Eigen::VectorXd& phi) {
  detail::check_phi(inst, phi);
  const Eigen::VectorXd v = inst.adjoint_at_nodes(phi);
  detail::check_conjugate_domain(inst, v);
  Eigen::VectorXd wx(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = inst.entropy.f_star_d1(v[i]);
    if (!std::isfinite(x)) {
      const double s = inst.rule.nodes[static_cast<std::size_t>(i)];
      throw NonFiniteError("(f*)' not finite at node s=" + std::to_string(s), s);
    }
    wx[i] = inst.rule.weights[static_cast<std::size_t>(i)] * x;
  }
  return inst.b - inst.design.transpose() * wx;
}

inline Eigen::MatrixXd dual_hessian(const ProblemInstance& inst, const Eigen::VectorXd& phi) {
  detail::check_phi(inst, phi);
  const Eigen::VectorXd v = inst.adjoint_at_nodes(phi);
  detail::check_conjugate_domain(inst, v);
  Eigen::VectorXd w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double d2 = inst.entropy.f_star_d2(v[i]);
    if (!std::isfinite(d2)) {
      const double s = inst.rule.nodes[static_cast<std::size_t>(i)];
      throw NonFiniteError("(f*)'' not finite at node s=" + std::to_string(s), s);
    }
    w[i] = inst.rule.weights[static_cast<std::size_t>(i)] * d2;
  }
  Eigen::MatrixXd h = -(inst.design.transpose() * w.asDiagonal() * inst.design);
  return 0.5 * (h + h.transpose());
}

/// Starting multipliers: zero when 0 is a valid conjugate argument, otherwise
/// coefficients whose combination is the constant -1 (Burg) or +1.
inline Eigen::VectorXd default_phi0(const ProblemInstance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.n());
  if (inst.entropy.f_star_domain.contains(0.0)) return Eigen::VectorXd::Zero(n);
  const double level = inst.entropy.f_star_domain.contains(-1.0) ? -1.0 : 1.0;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  if ((inst.design.col(0).array() == 1.0).all()) {
    phi[0] = level;
  } else {
    const Eigen::VectorXd target = Eigen::VectorXd::Constant(inst.design.rows(), level);
    phi = inst.design.colPivHouseholderQr().solve(target);
  }
  const Eigen::VectorXd v = inst.adjoint_at_nodes(phi);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!inst.entropy.f_star_domain.contains(v[i])) {
      throw DomainError("cannot construct a feasible starting point; supply phi0",
                        inst.rule.nodes[static_cast<std::size_t>(i)]);
    }
  }
  return phi;
}

inline double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

namespace detail {

// Ascent direction: Newton step from (-H) d = g, shifted if -H fails to factor,
// falling back to the gradient itself.
inline Eigen::VectorXd ascent_direction(const Eigen::MatrixXd& hess, const Eigen::VectorXd& grad) {
  const Eigen::MatrixXd neg = -hess;
  Eigen::LLT<Eigen::MatrixXd> llt(neg);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd d = llt.solve(grad);
    if (d.allFinite()) return d;
  }
  const double scale = hess.norm();
  const auto id = Eigen::MatrixXd::Identity(hess.rows(), hess.cols());
  for (double lambda = 1e-12 * scale; lambda <= 1e-4 * scale * (1.0 + 1e-12); lambda *= 10.0) {
    Eigen::LLT<Eigen::MatrixXd> shifted(neg + lambda * id);
    if (shifted.info() == Eigen::Success) {
      Eigen::VectorXd d = shifted.solve(grad);
      if (d.allFinite()) return d;
    }
  }
  return grad;
}

}  // namespace detail

/// Damped Newton ascent on the dual until ||grad D||_inf <= tol.
inline DualSolution solve_dual(const ProblemInstance& inst, const SolverOptions& opts = {}) {
  if (!(opts.tol > 0)) throw ValidationError("solver tolerance must be positive");
  if (opts.max_iter < 0) throw ValidationError("max_iter must be nonnegative");

  DualSolution sol;
  Eigen::VectorXd phi = opts.phi0 ? *opts.phi0 : default_phi0(inst);
  detail::check_phi(inst, phi);

  double value = dual_value(inst, phi);  // throws if phi0 is infeasible
  Eigen::VectorXd grad = dual_gradient(inst, phi);
  double residual = inf_norm(grad);
  sol.trace.push_back({0, residual, 0.0, value});

  int iter = 0;
  while (residual > opts.tol && iter < opts.max_iter) {
    const Eigen::VectorXd dir = detail::ascent_direction(dual_hessian(inst, phi), grad);

    bool accepted = false;
    double step = 1.0;
    Eigen::VectorXd trial;
    double trial_value = 0.0;
    Eigen::VectorXd trial_grad;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      trial = phi + step * dir;
      try {
        trial_value = dual_value(inst, trial);
      } catch (const DomainError&) {
        continue;
      }
      if (trial_value > value) {
        trial_grad = dual_gradient(inst, trial);
        accepted = true;
        break;
      }
      // Near the optimum the ascent is below rounding; accept a step that
      // keeps the value (to rounding) and reduces the residual.
      const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(value));
      if (trial_value >= value - slack) {
        Eigen::VectorXd g = dual_gradient(inst, trial);
        if (inf_norm(g) < residual) {
          trial_grad = std::move(g);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      sol.message = "line search failed to find an ascent step";
      break;
    }

    ++iter;
    phi = trial;
    value = trial_value;
    grad = trial_grad;
    residual = inf_norm(grad);
    sol.trace.push_back({iter, residual, step, value});
  }

  sol.mu = phi;
  sol.dual_value = value;
  sol.residual_inf = residual;
  sol.iterations = iter;
  sol.converged = residual <= opts.tol;
  if (sol.converged) {
    sol.message = "converged";
  } else if (sol.message.empty()) {
    sol.message = "iteration budget exhausted";
  }
  return sol;
}

}  // namespace maxent
