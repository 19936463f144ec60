#pragma once

// Moment functions a_1..a_n, the moment operator x -> (<a_k, x>)_k and
// Gram-matrix based linear-independence tests on subintervals.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "maxent/entropy.hpp"
#include "maxent/errors.hpp"
#include "maxent/quadrature.hpp"
#include "maxent/tabulated.hpp"

namespace maxent {

enum class BasisKind { monomial, piecewise_flat, tabulated };

inline std::string to_string(BasisKind k) {
  switch (k) {
    case BasisKind::monomial: return "monomial";
    case BasisKind::piecewise_flat: return "piecewise_flat";
    case BasisKind::tabulated: return "tabulated";
  }
  return "unknown";
}

struct MomentBasis {
  std::vector<ScalarMap> functions;
  std::vector<double> breakpoints;
  double sup_bound = 1.0;
  BasisKind kind = BasisKind::monomial;
  double lo = 0.0;
  double hi = 1.0;

  std::size_t size() const { return functions.size(); }

  /// Values a_k(s) for all k.
  Eigen::VectorXd eval(double s) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(functions.size()));
    for (std::size_t k = 0; k < functions.size(); ++k) out[static_cast<Eigen::Index>(k)] = functions[k](s);
    return out;
  }

  /// The function sum_k c_k a_k evaluated at s.
  double combination(const Eigen::VectorXd& c, double s) const {
    double v = 0.0;
    for (std::size_t k = 0; k < functions.size(); ++k) v += c[static_cast<Eigen::Index>(k)] * functions[k](s);
    return v;
  }
};

namespace detail {

inline double ipow(double s, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= s;
  return r;
}

inline void check_interval(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw ValidationError("basis interval must be finite with lo < hi");
  }
}

}  // namespace detail

/// a_i(s) = s^(i-1), i = 1..n.
inline MomentBasis monomial_basis(int n, double lo = 0.0, double hi = 1.0) {
  if (n < 1) throw ValidationError("monomial basis needs n >= 1");
  detail::check_interval(lo, hi);
  MomentBasis basis;
  basis.kind = BasisKind::monomial;
  basis.lo = lo;
  basis.hi = hi;
  for (int i = 0; i < n; ++i) basis.functions.emplace_back([i](double s) { return detail::ipow(s, i); });
  const double reach = std::max(std::abs(lo), std::abs(hi));
  basis.sup_bound = std::max(1.0, detail::ipow(reach, n - 1));
  return basis;
}

/// a_i(t) = t^(i-1) for t <= split and 1 beyond it.
inline MomentBasis piecewise_flat_basis(int n, double split, double lo = 0.0, double hi = 1.0) {
  if (n < 1) throw ValidationError("piecewise_flat basis needs n >= 1");
  detail::check_interval(lo, hi);
  if (!(split > lo && split < hi)) {
    throw ValidationError("piecewise_flat split must lie strictly inside the interval");
  }
  MomentBasis basis;
  basis.kind = BasisKind::piecewise_flat;
  basis.lo = lo;
  basis.hi = hi;
  basis.breakpoints = {split};
  for (int i = 0; i < n; ++i) {
    basis.functions.emplace_back([i, split](double t) { return t <= split ? detail::ipow(t, i) : 1.0; });
  }
  const double reach = std::max(std::abs(lo), std::abs(split));
  basis.sup_bound = std::max(1.0, detail::ipow(reach, n - 1));
  return basis;
}

/// Basis read from a table: columns after s are a_1..a_n, interpolated linearly.
/// sup_bound comes from the samples and can under-estimate the true supremum.
inline MomentBasis tabulated_basis(const Table& table, double lo, double hi) {
  detail::check_interval(lo, hi);
  if (table.columns.empty()) throw ValidationError("tabulated basis needs at least one function column");
  MomentBasis basis;
  basis.kind = BasisKind::tabulated;
  basis.lo = lo;
  basis.hi = hi;
  for (double b : table.breakpoints) {
    if (!(b > lo && b < hi)) throw ValidationError("tabulated breakpoint outside the open interval");
  }
  basis.breakpoints = table.breakpoints;
  double sup = 0.0;
  for (const auto& col : table.columns) {
    for (double v : col) sup = std::max(sup, std::abs(v));
    basis.functions.emplace_back(PiecewiseLinear(table.s, col));
  }
  basis.sup_bound = sup;
  return basis;
}

/// Values a_k(s_i) at every node: rows are nodes, columns are functions.
inline Eigen::MatrixXd basis_at_nodes(const MomentBasis& basis, const QuadratureRule& rule) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rule.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = basis.functions[k](rule.nodes[i]);
    }
  }
  return m;
}

/// (<a_1, x>, ..., <a_n, x>) over the rule's interval.
template <typename F>
Eigen::VectorXd apply_A(const MomentBasis& basis, const QuadratureRule& rule, F&& x) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = rule.nodes[i];
    const double xs = x(s);
    if (!std::isfinite(xs)) throw NonFiniteError("density not finite at node s=" + std::to_string(s), s);
    for (Eigen::Index k = 0; k < n; ++k) {
      out[k] += rule.weights[i] * basis.functions[static_cast<std::size_t>(k)](s) * xs;
    }
  }
  return out;
}

/// G_ij = integral of a_i a_j over [lo, hi] at the rule's resolution.
inline Eigen::MatrixXd gram_matrix(const MomentBasis& basis, const QuadratureRule& rule, double lo, double hi) {
  if (!(lo < hi)) throw ValidationError("gram_matrix: empty subinterval");
  if (lo < rule.lo || hi > rule.hi) throw ValidationError("gram_matrix: subinterval outside the rule interval");
  const auto sub = restrict_rule(rule, lo, hi);
  const auto vals = basis_at_nodes(basis, sub);
  const Eigen::Map<const Eigen::VectorXd> w(sub.weights.data(), static_cast<Eigen::Index>(sub.weights.size()));
  Eigen::MatrixXd g = vals.transpose() * w.asDiagonal() * vals;
  return 0.5 * (g + g.transpose());
}

inline Eigen::MatrixXd gram_matrix(const MomentBasis& basis, const QuadratureRule& rule) {
  return gram_matrix(basis, rule, rule.lo, rule.hi);
}

struct IndependenceReport {
  bool independent = false;
  double min_eigenvalue = 0.0;         // raw Gram matrix
  double max_eigenvalue = 0.0;
  double scaled_min_eigenvalue = 0.0;  // unit-diagonal Gram, used for the decision
  double threshold = 0.0;              // tol * trace / n of the unit-diagonal Gram, i.e. tol
};

inline constexpr double kDefaultIndependenceTol = 1e-10;

/// Numerical linear independence of the a_k on [lo, hi] via the L2 Gram matrix.
/// The decision uses D^-1/2 G D^-1/2 (D = diag G), so rescaling any a_k does not
/// change it; a function vanishing on [lo, hi] makes the set dependent.
inline IndependenceReport linearly_independent_on(const MomentBasis& basis, const QuadratureRule& rule, double lo,
                                                  double hi, double tol = kDefaultIndependenceTol) {
  if (!(tol > 0)) throw ValidationError("independence tolerance must be positive");
  const auto g = gram_matrix(basis, rule, lo, hi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  IndependenceReport r;
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.max_eigenvalue = es.eigenvalues().maxCoeff();
  if (!(g.diagonal().array() > 0.0).all()) return r;

  const Eigen::VectorXd d = g.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd c = d.asDiagonal() * g * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cs(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
  r.scaled_min_eigenvalue = cs.eigenvalues().minCoeff();
  r.threshold = tol * c.trace() / static_cast<double>(c.rows());
  r.independent = r.scaled_min_eigenvalue > r.threshold;
  return r;
}

/// A problem min I_f(x) s.t. Ax = b, discretized by a quadrature rule.
struct ProblemInstance {
  EntropySpec entropy;
  MomentBasis basis;
  QuadratureRule rule;
  Eigen::VectorXd b;
  Eigen::MatrixXd design;  // a_k(s_i), cached

  std::size_t n() const { return basis.size(); }
  double tau() const { return rule.hi; }

  /// (A^T phi)(s_i) at every node.
  Eigen::VectorXd adjoint_at_nodes(const Eigen::VectorXd& phi) const { return design * phi; }
};

inline ProblemInstance make_instance(EntropySpec entropy, MomentBasis basis, QuadratureRule rule, Eigen::VectorXd b) {
  if (basis.size() == 0) throw ValidationError("basis must have at least one function");
  if (static_cast<std::size_t>(b.size()) != basis.size()) {
    throw ValidationError("target vector length does not match basis size");
  }
  if (!b.allFinite()) throw ValidationError("target moments must be finite");
  for (double bp : basis.breakpoints) {
    if (!std::binary_search(rule.breakpoints.begin(), rule.breakpoints.end(), bp)) {
      throw ValidationError("quadrature rule is missing basis breakpoint " + std::to_string(bp));
    }
  }
  ProblemInstance inst{std::move(entropy), std::move(basis), std::move(rule), std::move(b), {}};
  inst.design = basis_at_nodes(inst.basis, inst.rule);
  if (!inst.design.allFinite()) throw ValidationError("basis function not finite at a quadrature node");
  // Tabulated sup_bound is sample-derived; allow rounding slack.
  if (inst.design.cwiseAbs().maxCoeff() > inst.basis.sup_bound * (1.0 + 1e-12)) {
    throw ValidationError("basis exceeds its declared sup_bound at a quadrature node");
  }
  return inst;
}

/// Same problem at a different quadrature rule (b is kept, not recomputed).
inline ProblemInstance with_rule(const ProblemInstance& inst, QuadratureRule rule) {
  return make_instance(inst.entropy, inst.basis, std::move(rule), inst.b);
}

}  // namespace maxent
