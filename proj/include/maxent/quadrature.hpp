#pragma once

// Composite Gauss-Legendre quadrature on a bounded interval.
//
// Panels never straddle a breakpoint, so integrands that are piecewise smooth
// with jumps only at breakpoints are integrated to full order.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent {

struct QuadratureRule {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> breakpoints;  // strictly inside (lo, hi), sorted
  int nodes_per_panel = 20;
  int panels_per_segment = 8;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double length() const { return hi - lo; }
};

inline constexpr int kDefaultQuadOrder = 20;
inline constexpr int kDefaultQuadPanels = 8;

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
inline void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(order, 0.0);
  w.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // One more evaluation so dp corresponds to the final z.
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 1; j <= order; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = order * (z * p0 - p1) / (z * z - 1.0);
        break;
      }
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (order % 2 == 1) x[order / 2] = 0.0;
}

inline QuadratureRule build_rule(double lo, double hi, std::span<const double> breakpoints,
                                 int nodes_per_panel = kDefaultQuadOrder,
                                 int panels_per_segment = kDefaultQuadPanels) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw ValidationError("quadrature interval must be finite with lo < hi");
  }
  if (nodes_per_panel < 1 || panels_per_segment < 1) {
    throw ValidationError("quadrature order and panel count must be >= 1");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double b = breakpoints[i];
    if (!(b > lo && b < hi)) {
      throw ValidationError("breakpoint " + std::to_string(b) + " not strictly inside the interval");
    }
    if (i > 0 && !(b > breakpoints[i - 1])) {
      throw ValidationError("breakpoints must be sorted and distinct");
    }
  }

  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  rule.nodes_per_panel = nodes_per_panel;
  rule.panels_per_segment = panels_per_segment;

  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_panel, gx, gw);

  std::vector<double> edges{lo};
  edges.insert(edges.end(), breakpoints.begin(), breakpoints.end());
  edges.push_back(hi);

  const std::size_t total =
      (edges.size() - 1) * static_cast<std::size_t>(panels_per_segment * nodes_per_panel);
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double seg_lo = edges[s];
    const double h = (edges[s + 1] - seg_lo) / panels_per_segment;
    for (int p = 0; p < panels_per_segment; ++p) {
      const double a = seg_lo + p * h;
      const double b = (p + 1 == panels_per_segment) ? edges[s + 1] : a + h;
      const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
      for (int k = 0; k < nodes_per_panel; ++k) {
        rule.nodes.push_back(mid + rad * gx[k]);
        rule.weights.push_back(rad * gw[k]);
      }
    }
  }
  return rule;
}

inline QuadratureRule build_rule(double lo, double hi, std::initializer_list<double> breakpoints,
                                 int nodes_per_panel = kDefaultQuadOrder,
                                 int panels_per_segment = kDefaultQuadPanels) {
  return build_rule(lo, hi, std::span<const double>(breakpoints.begin(), breakpoints.size()),
                    nodes_per_panel, panels_per_segment);
}

/// Sorted, de-duplicated union of breakpoint lists, restricted to (lo, hi).
inline std::vector<double> merge_breakpoints(double lo, double hi, std::span<const double> a,
                                             std::span<const double> b = {}) {
  std::vector<double> out;
  for (double v : a)
    if (v > lo && v < hi) out.push_back(v);
  for (double v : b)
    if (v > lo && v < hi) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Same resolution, different interval; keeps the breakpoints that fall inside it.
inline QuadratureRule restrict_rule(const QuadratureRule& rule, double lo, double hi) {
  return build_rule(lo, hi, merge_breakpoints(lo, hi, rule.breakpoints), rule.nodes_per_panel,
                    rule.panels_per_segment);
}

/// Same interval and resolution with extra breakpoints added.
inline QuadratureRule with_breakpoints(const QuadratureRule& rule, std::span<const double> extra) {
  return build_rule(rule.lo, rule.hi, merge_breakpoints(rule.lo, rule.hi, rule.breakpoints, extra),
                    rule.nodes_per_panel, rule.panels_per_segment);
}

/// Same interval and breakpoints at `factor` times as many panels.
inline QuadratureRule refine_rule(const QuadratureRule& rule, int factor = 2) {
  return build_rule(rule.lo, rule.hi, rule.breakpoints, rule.nodes_per_panel,
                    rule.panels_per_segment * factor);
}

/// Sum of w_i g(s_i) in node order. Throws NonFiniteError at the first bad node.
template <typename F>
double integrate(const QuadratureRule& rule, F&& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = g(rule.nodes[i]);
    if (!std::isfinite(v)) {
      throw NonFiniteError("integrand not finite at node s=" + std::to_string(rule.nodes[i]),
                           rule.nodes[i]);
    }
    sum += rule.weights[i] * v;
  }
  return sum;
}

}  // namespace maxent
