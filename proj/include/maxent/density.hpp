#pragma once

// Reference densities rho used to generate target moments b = A rho.

#include <string>
#include <vector>

#include "maxent/moments.hpp"
#include "maxent/quadrature.hpp"
#include "maxent/tabulated.hpp"

namespace maxent {

struct Density {
  ScalarMap eval;
  std::vector<double> breakpoints;
  std::string label;

  double operator()(double s) const { return eval(s); }
};

/// Indicator of [lo, split].
inline Density pulse(double split = 0.5, double lo = 0.0) {
  return {[split, lo](double s) { return (s >= lo && s <= split) ? 1.0 : 0.0; }, {split}, "pulse"};
}

inline Density constant_density(double c) {
  return {[c](double) { return c; }, {}, "constant"};
}

/// First value column of a table, interpolated linearly.
inline Density tabulated_density(const Table& table) {
  if (table.columns.empty()) throw ValidationError("tabulated density needs a value column");
  return {PiecewiseLinear(table.s, table.columns.front()), table.breakpoints, "tabulated"};
}

/// Builds the instance whose target moments are those of `rho`, with a rule
/// that honours both the basis and the density breakpoints.
inline ProblemInstance instance_from_density(const EntropySpec& entropy, const MomentBasis& basis,
                                             const Density& rho, int order = kDefaultQuadOrder,
                                             int panels = kDefaultQuadPanels) {
  const auto bps = merge_breakpoints(basis.lo, basis.hi, basis.breakpoints, rho.breakpoints);
  auto rule = build_rule(basis.lo, basis.hi, bps, order, panels);
  Eigen::VectorXd b = apply_A(basis, rule, rho.eval);
  return make_instance(entropy, basis, std::move(rule), std::move(b));
}

}  // namespace maxent
