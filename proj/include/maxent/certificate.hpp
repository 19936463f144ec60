#pragma once

// Constructive strong-duality certificates for min { I_f(x) : Ax = b }.
//
// Both certificates start from a feasible density x that stays strictly inside
// [alpha, beta] on some margin interval [zeta1, zeta2] where the moment
// functions are linearly independent.
//
//  * Core certificate: for any direction eta, y_k in span{a_j} restricted to
//    the margin interval satisfy <y_k, a_j> = eta_k delta_jk, and a small
//    multiple t of sum_k y_k perturbs x inside S_f while A(x + y) = b + t eta.
//  * Qri certificate: clip x away from the bounds, then correct the clipped
//    moments on the margin interval to get y with A y = b and
//    alpha + eps <= y <= beta - eps.
//
// Membership checks are sample-based: the result is numerical evidence for
// the hypotheses, not an almost-everywhere proof.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "maxent/entropy.hpp"
#include "maxent/errors.hpp"
#include "maxent/moments.hpp"
#include "maxent/primal.hpp"
#include "maxent/quadrature.hpp"

namespace maxent {

inline constexpr int kMembershipGridPoints = 2001;
inline constexpr int kMarginGridPoints = 2001;
inline constexpr double kStepSafety = 0.99;
inline constexpr double kDeltaInflation = 1.01;
inline constexpr double kMomentTol = 1e-8;

/// [alpha, beta] as an interval; beta may be +inf.
inline Interval bounds_interval(double alpha, double beta) { return {alpha, beta, true, std::isfinite(beta)}; }

namespace detail {

// All points at which membership is tested: a uniform grid over [lo, hi] plus
// the rule nodes inside it.
inline std::vector<double> sample_points(const QuadratureRule& rule, double lo, double hi,
                                         int grid = kMembershipGridPoints) {
  auto pts = uniform_grid(lo, hi, grid);
  for (double s : rule.nodes)
    if (s >= lo && s <= hi) pts.push_back(s);
  return pts;
}

inline bool within(double v, double alpha, double beta) { return v >= alpha && v <= beta; }

inline double clearance(double eps1, double eps2, double alpha, double beta) {
  return std::isfinite(beta) ? std::min(eps1 - alpha, beta - eps2) : eps1 - alpha;
}

}  // namespace detail

/// Is x(s) in [alpha, beta] at every node and on a 2001-point grid?
template <typename X>
bool in_S_f(const EntropySpec& entropy, X&& x, double alpha, double beta, const QuadratureRule& rule) {
  if (!(alpha <= beta) || std::isnan(alpha) || std::isnan(beta)) throw ValidationError("need alpha <= beta");
  if (!entropy.f_domain.contains(bounds_interval(alpha, beta))) {
    throw ValidationError("[alpha, beta] = " + bounds_interval(alpha, beta).str() + " not contained in dom f = " +
                          entropy.f_domain.str());
  }
  for (double s : detail::sample_points(rule, rule.lo, rule.hi)) {
    if (!detail::within(x(s), alpha, beta)) return false;
  }
  return true;
}

struct MarginInterval {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double eps1 = 0.0;  // observed min of x on [zeta1, zeta2]
  double eps2 = 0.0;  // observed max of x on [zeta1, zeta2]
  double eps = 0.0;   // grid level: x in [alpha + eps, beta - eps] there

  double width() const { return zeta2 - zeta1; }
};

/// Widest interval between breakpoints on which x keeps a margin eps from
/// [alpha, beta], for the largest eps on the grid (beta - alpha) / 2^k
/// (2^-k when beta is infinite). `extra_points` (e.g. quadrature nodes)
/// also enter the observed range [eps1, eps2].
template <typename X>
MarginInterval find_margin_interval(X&& x, double alpha, double beta, double lo, double hi,
                                    const std::vector<double>& breakpoints, double min_width,
                                    const std::vector<double>& extra_points = {}) {
  if (!(min_width > 0)) throw ValidationError("min_width must be positive");
  if (!(alpha < beta)) throw ValidationError("need alpha < beta");

  std::vector<double> edges{lo};
  for (double b : merge_breakpoints(lo, hi, breakpoints)) edges.push_back(b);
  edges.push_back(hi);

  struct Segment {
    std::vector<double> s, x;
  };
  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment seg;
    seg.s = uniform_grid(edges[i], edges[i + 1], kMarginGridPoints);
    for (double s : seg.s) seg.x.push_back(x(s));
    segments.push_back(std::move(seg));
  }

  for (int k = 1; k <= 60; ++k) {
    const double eps = std::isfinite(beta) ? (beta - alpha) / std::ldexp(1.0, k) : std::ldexp(1.0, -k);
    const double floor = alpha + eps;
    const double ceil = std::isfinite(beta) ? beta - eps : kInf;

    double best_lo = 0.0, best_hi = 0.0, best_w = -1.0;
    for (const auto& seg : segments) {
      std::size_t i = 0;
      while (i < seg.s.size()) {
        if (!(seg.x[i] >= floor && seg.x[i] <= ceil)) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j + 1 < seg.s.size() && seg.x[j + 1] >= floor && seg.x[j + 1] <= ceil) ++j;
        const double w = seg.s[j] - seg.s[i];
        if (w > best_w) {
          best_w = w;
          best_lo = seg.s[i];
          best_hi = seg.s[j];
        }
        i = j + 1;
      }
    }
    if (best_w < min_width || best_w <= 0.0) continue;

    MarginInterval m{best_lo, best_hi, kInf, -kInf, eps};
    auto observe = [&](double s) {
      const double v = x(s);
      m.eps1 = std::min(m.eps1, v);
      m.eps2 = std::max(m.eps2, v);
    };
    for (const auto& seg : segments)
      for (std::size_t i = 0; i < seg.s.size(); ++i)
        if (seg.s[i] >= best_lo && seg.s[i] <= best_hi) observe(seg.s[i]);
    for (double s : extra_points)
      if (s >= best_lo && s <= best_hi) observe(s);
    if (m.eps1 > alpha && m.eps2 < beta) return m;
  }
  throw HypothesisError("margin interval", "no interval of width >= " + std::to_string(min_width) +
                                               " where x stays strictly inside " +
                                               bounds_interval(alpha, beta).str());
}

/// y_1..y_n in span{a_j} restricted to [zeta1, zeta2] (zero outside), stored
/// as coefficient vectors: y_k = sum_j coeffs(j, k) a_j.
struct DirectionFunctions {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  Eigen::MatrixXd coeffs;

  bool supports(double s) const { return s >= zeta1 && s <= zeta2; }

  double eval(const MomentBasis& basis, std::size_t k, double s) const {
    if (!supports(s)) return 0.0;
    return basis.combination(coeffs.col(static_cast<Eigen::Index>(k)), s);
  }

  /// Coefficients of sum_k y_k.
  Eigen::VectorXd sum_coeffs() const { return coeffs.rowwise().sum(); }
};

/// For each k, project a_k off span{a_j : j != k} on [zeta1, zeta2] and scale
/// the remainder so that <y_k, a_k> = eta_k; then <y_k, a_j> = 0 for j != k.
inline DirectionFunctions build_direction_functions(const MomentBasis& basis, const QuadratureRule& rule,
                                                    double zeta1, double zeta2, const Eigen::VectorXd& eta,
                                                    double tol = kDefaultIndependenceTol) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (eta.size() != n) throw ValidationError("direction vector length does not match basis size");
  const auto indep = linearly_independent_on(basis, rule, zeta1, zeta2, tol);
  if (!indep.independent) {
    throw HypothesisError("linear independence on [zeta1, zeta2]",
                          "smallest scaled Gram eigenvalue " + std::to_string(indep.scaled_min_eigenvalue) + " <= " +
                              std::to_string(indep.threshold) + "; reduce n or choose another interval");
  }
  const Eigen::MatrixXd g = gram_matrix(basis, rule, zeta1, zeta2);

  DirectionFunctions out{zeta1, zeta2, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eta[k] == 0.0) continue;
    // v = a_k - sum_{j != k} c_j a_j with G_{-k,-k} c = G_{-k,k}.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[k] = 1.0;
    if (n > 1) {
      std::vector<Eigen::Index> others;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != k) others.push_back(j);
      const auto m = static_cast<Eigen::Index>(others.size());
      Eigen::MatrixXd sub(m, m);
      Eigen::VectorXd rhs(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        rhs[r] = g(others[static_cast<std::size_t>(r)], k);
        for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = g(others[static_cast<std::size_t>(r)], others[static_cast<std::size_t>(c)]);
      }
      // Symmetric diagonal scaling keeps the solve accurate for badly scaled bases.
      const Eigen::VectorXd scale = sub.diagonal().cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXd scaled = scale.asDiagonal() * sub * scale.asDiagonal();
      Eigen::VectorXd c = scale.cwiseProduct(scaled.ldlt().solve(scale.cwiseProduct(rhs)));
      for (Eigen::Index r = 0; r < m; ++r) v[others[static_cast<std::size_t>(r)]] = -c[r];
    }
    const double akv = g.row(k).dot(v);  // <a_k, v>
    out.coeffs.col(k) = (eta[k] / akv) * v;
  }
  return out;
}

/// <y_k, a_j> on [zeta1, zeta2] by pointwise quadrature; entry (j, k).
inline Eigen::MatrixXd direction_inner_products(const MomentBasis& basis, const QuadratureRule& rule,
                                                const DirectionFunctions& dirs) {
  const auto sub = restrict_rule(rule, dirs.zeta1, dirs.zeta2);
  const auto vals = basis_at_nodes(basis, sub);
  const Eigen::MatrixXd y = vals * dirs.coeffs;
  const Eigen::Map<const Eigen::VectorXd> w(sub.weights.data(), static_cast<Eigen::Index>(sub.weights.size()));
  return vals.transpose() * w.asDiagonal() * y;
}

struct CertificateOptions {
  double min_width = 0.0;  // 0 selects tau / 100
  double independence_tol = kDefaultIndependenceTol;
  /// Use this interval instead of searching for one.
  std::optional<std::pair<double, double>> candidate;
};

struct CoreVerification {
  int trials = 0;
  int p1_passed = 0;  // x + y stays in [alpha, beta]
  int p2_passed = 0;  // A(x + y) = b + t eta
  int passed = 0;     // both
  double worst_p1_violation = 0.0;
  double worst_p2_residual = 0.0;
  double t_scale = 1.0;
};

struct CoreCertificate {
  double alpha = 0.0;
  double beta = kInf;
  MarginInterval margin;
  DirectionFunctions y_unit;  // y_k for eta_k = 1
  double delta = 0.0;         // > max_{s,k} |y_unit_k(s)|
  double t_unit = 0.0;        // step for directions with ||eta||_inf = 1
  std::size_t n = 0;
  CoreVerification verification;

  double clearance() const { return detail::clearance(margin.eps1, margin.eps2, alpha, beta); }

  /// Step t(eta) = 0.99 * clearance / (n * Delta(eta)), Delta(eta) = ||eta||_inf * delta.
  double t_for(const Eigen::VectorXd& eta) const {
    const double scale = inf_norm(eta);
    if (scale == 0.0) return t_unit;
    return t_unit / scale;
  }
};

namespace detail {

// Augmented rule: instance breakpoints plus the margin interval ends, so
// integrands supported on the margin interval stay panel-wise smooth.
inline QuadratureRule margin_rule(const QuadratureRule& rule, double zeta1, double zeta2) {
  const std::vector<double> ends{zeta1, zeta2};
  return with_breakpoints(rule, ends);
}

template <typename X>
void check_feasible(const ProblemInstance& inst, const QuadratureRule& rule, X&& x, std::vector<std::string>& failed,
                    std::string& detail) {
  const Eigen::VectorXd ax = apply_A(inst.basis, rule, x);
  const double r = inf_norm(ax - inst.b);
  if (!(r <= kMomentTol * std::max(1.0, inf_norm(inst.b)))) {
    failed.push_back("feasibility Ax = b");
    detail += "||Ax - b||_inf = " + std::to_string(r) + ". ";
  }
}

inline double min_width_or_default(const CertificateOptions& o, const QuadratureRule& rule) {
  return o.min_width > 0 ? o.min_width : rule.length() / 100.0;
}

template <typename X>
MarginInterval margin_on_candidate(X&& x, double alpha, double beta, const QuadratureRule& rule, double lo, double hi) {
  MarginInterval m{lo, hi, kInf, -kInf, 0.0};
  for (double s : sample_points(rule, lo, hi, kMarginGridPoints)) {
    const double v = x(s);
    m.eps1 = std::min(m.eps1, v);
    m.eps2 = std::max(m.eps2, v);
  }
  m.eps = clearance(m.eps1, m.eps2, alpha, beta);
  return m;
}

}  // namespace detail

/// Packages the margin interval, the direction functions and the step rule.
template <typename X>
CoreCertificate build_core_certificate(const ProblemInstance& inst, X&& x, double alpha, double beta,
                                       const CertificateOptions& opts = {}) {
  const auto& rule = inst.rule;
  std::vector<std::string> failed;
  std::string detail;

  try {
    if (!in_S_f(inst.entropy, x, alpha, beta, rule)) {
      failed.push_back("x in S_f");
      detail += "x leaves " + bounds_interval(alpha, beta).str() + ". ";
    }
  } catch (const ValidationError& e) {
    throw HypothesisError("[alpha, beta] within dom f", e.what());
  }

  MarginInterval margin;
  bool have_margin = false;
  if (opts.candidate) {
    const auto [lo, hi] = *opts.candidate;
    if (!(lo >= rule.lo && hi <= rule.hi && lo < hi)) throw ValidationError("candidate interval outside [0, tau]");
    margin = detail::margin_on_candidate(x, alpha, beta, rule, lo, hi);
    have_margin = margin.eps1 > alpha && margin.eps2 < beta;
    if (!have_margin) {
      failed.push_back("margin interval");
      detail += "x is not strictly inside the bounds on the candidate interval. ";
    }
  } else {
    try {
      margin = find_margin_interval(x, alpha, beta, rule.lo, rule.hi, rule.breakpoints,
                                    detail::min_width_or_default(opts, rule), rule.nodes);
      have_margin = true;
    } catch (const HypothesisError& e) {
      failed.push_back("margin interval");
      detail += std::string(e.what()) + ". ";
    }
  }

  if (have_margin || opts.candidate) {
    const auto indep = linearly_independent_on(inst.basis, rule, margin.zeta1, margin.zeta2, opts.independence_tol);
    if (!indep.independent) {
      failed.push_back("linear independence on [zeta1, zeta2]");
      detail += "smallest scaled Gram eigenvalue " + std::to_string(indep.scaled_min_eigenvalue) + ". ";
    }
  }
  if (have_margin) detail::check_feasible(inst, detail::margin_rule(rule, margin.zeta1, margin.zeta2), x, failed, detail);
  if (!failed.empty()) throw HypothesisError(failed, detail);

  CoreCertificate cert;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.margin = margin;
  cert.n = inst.n();
  const auto n = static_cast<Eigen::Index>(inst.n());
  cert.y_unit = build_direction_functions(inst.basis, rule, margin.zeta1, margin.zeta2, Eigen::VectorXd::Ones(n),
                                          opts.independence_tol);

  double sup = 0.0;
  const auto pts = detail::sample_points(detail::margin_rule(rule, margin.zeta1, margin.zeta2), margin.zeta1,
                                         margin.zeta2, kMarginGridPoints);
  for (double s : pts) {
    const Eigen::VectorXd a = inst.basis.eval(s);
    sup = std::max(sup, (cert.y_unit.coeffs.transpose() * a).cwiseAbs().maxCoeff());
  }
  cert.delta = kDeltaInflation * sup;
  cert.t_unit = kStepSafety * cert.clearance() / (static_cast<double>(cert.n) * cert.delta);
  if (!(cert.t_unit * static_cast<double>(cert.n) * cert.delta < cert.clearance())) {
    throw HypothesisError("step bound t n Delta < clearance", "degenerate margin");
  }
  return cert;
}

/// Unit-norm direction for trial `trial`, reproducible from (seed, trial).
inline Eigen::VectorXd random_direction(std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Eigen::VectorXd eta(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = normal(rng);
  } while (eta.norm() == 0.0);
  return eta / eta.norm();
}

/// Checks one direction: x + y in [alpha, beta] and A(x + y) = b + t eta.
template <typename X>
std::pair<double, double> check_core_direction(const ProblemInstance& inst, X&& x, const CoreCertificate& cert,
                                               const Eigen::VectorXd& eta, double t_scale = 1.0) {
  const auto rule = detail::margin_rule(inst.rule, cert.y_unit.zeta1, cert.y_unit.zeta2);
  const double t = t_scale * cert.t_for(eta);
  const Eigen::VectorXd coeffs = t * (cert.y_unit.coeffs * eta);  // t * sum_k eta_k y_unit_k
  auto y = [&](double s) { return cert.y_unit.supports(s) ? inst.basis.combination(coeffs, s) : 0.0; };

  double violation = 0.0;
  auto pts = detail::sample_points(rule, rule.lo, rule.hi);
  const auto local = uniform_grid(cert.y_unit.zeta1, cert.y_unit.zeta2, kMarginGridPoints);
  pts.insert(pts.end(), local.begin(), local.end());
  for (double s : pts) {
    const double v = x(s) + y(s);
    violation = std::max({violation, cert.alpha - v, v - cert.beta});
  }
  const Eigen::VectorXd axy = apply_A(inst.basis, rule, [&](double s) { return x(s) + y(s); });
  const double p2 = inf_norm(axy - (inst.b + t * eta));
  return {violation, p2};
}

template <typename X>
CoreVerification verify_core_certificate(const ProblemInstance& inst, X&& x, const CoreCertificate& cert, int trials,
                                         std::uint64_t seed, double t_scale = 1.0) {
  CoreVerification rep;
  rep.trials = trials;
  rep.t_scale = t_scale;
  for (int i = 0; i < trials; ++i) {
    const auto eta = random_direction(cert.n, seed, static_cast<std::uint64_t>(i));
    const auto [violation, p2] = check_core_direction(inst, x, cert, eta, t_scale);
    const bool ok1 = violation <= 0.0;
    const bool ok2 = p2 <= kMomentTol;
    rep.p1_passed += ok1;
    rep.p2_passed += ok2;
    rep.passed += ok1 && ok2;
    rep.worst_p1_violation = std::max(rep.worst_p1_violation, violation);
    rep.worst_p2_residual = std::max(rep.worst_p2_residual, p2);
  }
  return rep;
}

struct QriCertificate {
  int m = 0;
  double alpha = 0.0;
  double beta = kInf;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double delta = 0.0;  // clearance of x on [zeta1, zeta2]
  double clip_lo = 0.0;
  double clip_hi = kInf;
  Eigen::VectorXd v_coeffs;  // v = sum_j v_coeffs_j a_j on [zeta1, zeta2]
  double sup_v = 0.0;
  double eps = 0.0;
  double moment_match_residual = 0.0;
  ScalarMap y;
};

/// Clip-and-correct construction of y with A y = b strictly inside the bounds.
template <typename X>
QriCertificate build_qri_certificate(const ProblemInstance& inst, X&& x, double alpha, double beta, int m_max,
                                     const CertificateOptions& opts = {}) {
  if (m_max < 3) throw ValidationError("m_max must be >= 3");
  const auto& rule = inst.rule;
  if (!inst.entropy.f_domain.contains(bounds_interval(alpha, beta))) {
    throw HypothesisError("[alpha, beta] within dom f", bounds_interval(alpha, beta).str() + " not in dom f");
  }

  MarginInterval margin;
  if (opts.candidate) {
    margin = detail::margin_on_candidate(x, alpha, beta, rule, opts.candidate->first, opts.candidate->second);
    if (!(margin.eps1 > alpha && margin.eps2 < beta)) {
      throw HypothesisError("margin interval", "x not strictly inside the bounds on the candidate interval");
    }
  } else {
    margin = find_margin_interval(x, alpha, beta, rule.lo, rule.hi, rule.breakpoints,
                                  detail::min_width_or_default(opts, rule), rule.nodes);
  }
  const double delta = detail::clearance(margin.eps1, margin.eps2, alpha, beta);
  const auto arule = detail::margin_rule(rule, margin.zeta1, margin.zeta2);

  // Independence on T1 is checked by build_direction_functions; check it up
  // front so the failure is reported before any clipping.
  const auto indep = linearly_independent_on(inst.basis, rule, margin.zeta1, margin.zeta2, opts.independence_tol);
  if (!indep.independent) {
    throw HypothesisError("linear independence on [zeta1, zeta2]",
                          "smallest scaled Gram eigenvalue " + std::to_string(indep.scaled_min_eigenvalue));
  }

  // Everything below is evaluated at fixed points, so cache x and a_k there.
  const auto& nodes = arule.nodes;
  const Eigen::MatrixXd design = basis_at_nodes(inst.basis, arule);
  Eigen::VectorXd x_nodes(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) x_nodes[static_cast<Eigen::Index>(i)] = x(nodes[i]);
  const Eigen::Map<const Eigen::VectorXd> w(arule.weights.data(), static_cast<Eigen::Index>(arule.weights.size()));

  const auto local_pts = detail::sample_points(arule, margin.zeta1, margin.zeta2, kMembershipGridPoints);
  Eigen::MatrixXd local_basis(static_cast<Eigen::Index>(local_pts.size()), static_cast<Eigen::Index>(inst.n()));
  for (std::size_t i = 0; i < local_pts.size(); ++i)
    local_basis.row(static_cast<Eigen::Index>(i)) = inst.basis.eval(local_pts[i]).transpose();

  // y_k scales linearly with eta_k, so v for eta = d is unit.coeffs * d.
  const auto unit = build_direction_functions(inst.basis, rule, margin.zeta1, margin.zeta2,
                                              Eigen::VectorXd::Ones(static_cast<Eigen::Index>(inst.n())),
                                              opts.independence_tol);

  const double span = std::isfinite(beta) ? beta - alpha : 1.0;
  std::vector<std::pair<int, double>> decay;

  for (int m = 3; m <= m_max; ++m) {
    const double lo_c = alpha + span / m;
    const double hi_c = std::isfinite(beta) ? beta - span / m : kInf;
    // T1 must be untouched by the clipping: x in [alpha + delta, beta - delta] there.
    if (span / m > delta) continue;

    const Eigen::VectorXd xm_nodes = x_nodes.cwiseMax(lo_c).cwiseMin(hi_c);
    const Eigen::VectorXd d = design.transpose() * w.cwiseProduct(xm_nodes - x_nodes);
    const double dn = inf_norm(d);
    if (m == 3 || (m & (m - 1)) == 0 || m == m_max) decay.emplace_back(m, dn);

    Eigen::VectorXd v_coeffs = Eigen::VectorXd::Zero(d.size());
    double sup_v = 0.0;
    if (dn > 0.0) {
      v_coeffs = unit.coeffs * d;
      sup_v = (local_basis * v_coeffs).cwiseAbs().maxCoeff();
    }
    if (!(sup_v < delta / 2)) continue;

    QriCertificate cert;
    cert.m = m;
    cert.alpha = alpha;
    cert.beta = beta;
    cert.zeta1 = margin.zeta1;
    cert.zeta2 = margin.zeta2;
    cert.delta = delta;
    cert.clip_lo = lo_c;
    cert.clip_hi = hi_c;
    cert.v_coeffs = v_coeffs;
    cert.sup_v = sup_v;
    const double z1 = margin.zeta1, z2 = margin.zeta2;
    const bool zero_v = dn == 0.0;
    cert.y = [x, basis = inst.basis, v_coeffs, lo_c, hi_c, z1, z2, zero_v](double s) {
      const double xm = std::min(std::max(x(s), lo_c), hi_c);
      if (zero_v || s < z1 || s > z2) return xm;
      return xm - basis.combination(v_coeffs, s);
    };

    double eps = kInf;
    for (double s : detail::sample_points(arule, rule.lo, rule.hi)) {
      const double ys = cert.y(s);
      eps = std::min(eps, ys - alpha);
      if (std::isfinite(beta)) eps = std::min(eps, beta - ys);
    }
    for (double s : local_pts) {
      const double ys = cert.y(s);
      eps = std::min(eps, ys - alpha);
      if (std::isfinite(beta)) eps = std::min(eps, beta - ys);
    }
    cert.eps = eps;
    cert.moment_match_residual = inf_norm(apply_A(inst.basis, arule, cert.y) - inst.b);
    return cert;
  }

  std::string trend;
  for (const auto& [m, dn] : decay) trend += " m=" + std::to_string(m) + ":|d|=" + std::to_string(dn);
  throw HypothesisError("qri truncation level", "no m <= " + std::to_string(m_max) +
                                                    " with sup|v| < delta/2 (delta=" + std::to_string(delta) +
                                                    ");" + trend);
}

}  // namespace maxent
