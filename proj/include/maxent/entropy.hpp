#pragma once

// Convex entropy integrands f together with their Fenchel conjugates.
//
// Every built-in keeps f, f*, (f*)' and (f*)'' as plain scalar maps with
// declared domains. The raw maps assume their argument is in the domain;
// the member functions of EntropySpec do the checking.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "maxent/errors.hpp"
#include "maxent/interval.hpp"

namespace maxent {

using ScalarMap = std::function<double(double)>;

struct EntropySpec {
  std::string name;
  Interval f_domain;
  ScalarMap f;
  ScalarMap f_star;
  Interval f_star_domain;
  ScalarMap f_star_d1;
  ScalarMap f_star_d2;

  /// f(u), or +inf outside the domain.
  double eval_f(double u) const {
    if (!f_domain.contains(u)) return kInf;
    return f(u);
  }

  double conjugate(double v) const {
    check_dual(v);
    return f_star(v);
  }
  double conjugate_d1(double v) const {
    check_dual(v);
    return f_star_d1(v);
  }
  double conjugate_d2(double v) const {
    check_dual(v);
    return f_star_d2(v);
  }

  void check_dual(double v) const {
    if (!f_star_domain.contains(v)) {
      throw DomainError(name + ": conjugate argument v=" + std::to_string(v) + " outside " +
                            f_star_domain.str(),
                        v);
    }
  }
};

namespace detail {

// x log x with the 0 log 0 = 0 convention.
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

// log(1 + e^v) without overflow.
inline double softplus(double v) { return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

inline double logistic(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace detail

inline std::vector<std::string> builtin_entropy_names() {
  return {"l2_norm", "boltzmann_shannon", "translated_boltzmann_shannon", "burg", "cosh", "fermi_dirac"};
}

/// Looks up one of the tabulated entropies by identifier.
inline EntropySpec builtin_entropy(const std::string& name) {
  using detail::xlogx;
  const Interval nonneg{0.0, kInf, true, false};

  if (name == "l2_norm") {
    return {name,
            Interval::real_line(),
            [](double u) { return 0.5 * u * u; },
            [](double v) { return 0.5 * v * v; },
            Interval::real_line(),
            [](double v) { return v; },
            [](double) { return 1.0; }};
  }
  if (name == "boltzmann_shannon") {
    return {name,
            nonneg,
            [](double u) { return xlogx(u); },
            [](double v) { return std::exp(v - 1.0); },
            Interval::real_line(),
            [](double v) { return std::exp(v - 1.0); },
            [](double v) { return std::exp(v - 1.0); }};
  }
  if (name == "translated_boltzmann_shannon") {
    return {name,
            nonneg,
            [](double u) { return xlogx(u) - u; },
            [](double v) { return std::exp(v); },
            Interval::real_line(),
            [](double v) { return std::exp(v); },
            [](double v) { return std::exp(v); }};
  }
  if (name == "burg") {
    return {name,
            Interval::open(0.0, kInf),
            [](double u) { return -std::log(u); },
            [](double v) { return -1.0 - std::log(-v); },
            Interval::open(-kInf, 0.0),
            [](double v) { return -1.0 / v; },
            [](double v) { return 1.0 / (v * v); }};
  }
  if (name == "cosh") {
    // Conjugate of cosh is v asinh(v) - sqrt(1 + v^2).
    return {name,
            Interval::real_line(),
            [](double u) { return std::cosh(u); },
            [](double v) { return v * std::asinh(v) - std::hypot(1.0, v); },
            Interval::real_line(),
            [](double v) { return std::asinh(v); },
            [](double v) { return 1.0 / std::hypot(1.0, v); }};
  }
  if (name == "fermi_dirac") {
    return {name,
            Interval::closed(0.0, 1.0),
            [](double u) { return xlogx(u) + xlogx(1.0 - u); },
            [](double v) { return detail::softplus(v); },
            Interval::real_line(),
            [](double v) { return detail::logistic(v); },
            [](double v) {
              const double p = detail::logistic(v);
              return p * (1.0 - p);
            }};
  }

  std::string known;
  for (const auto& n : builtin_entropy_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown entropy '" + name + "'; available: " + known);
}

inline double eval_f(const EntropySpec& spec, double u) { return spec.eval_f(u); }

/// f(u) + f*(v) - uv, which is nonnegative and vanishes iff v is a subgradient of f at u.
inline double fenchel_young_gap(const EntropySpec& spec, double u, double v) {
  if (!spec.f_domain.contains(u)) {
    throw DomainError(spec.name + ": fenchel_young_gap argument u=" + std::to_string(u) +
                          " outside " + spec.f_domain.str(),
                      u);
  }
  if (!spec.f_star_domain.contains(v)) {
    throw DomainError(spec.name + ": fenchel_young_gap argument v=" + std::to_string(v) +
                          " outside " + spec.f_star_domain.str(),
                      v);
  }
  return spec.f(u) + spec.f_star(v) - u * v;
}

}  // namespace maxent
