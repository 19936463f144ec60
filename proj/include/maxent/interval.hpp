#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace maxent {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval of the real line; endpoints may be infinite (and are then open).
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval closed(double a, double b) { return {a, b, std::isfinite(a), std::isfinite(b)}; }
  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval real_line() { return {}; }

  bool contains(double v) const {
    if (std::isnan(v)) return false;
    const bool above = lo_closed ? v >= lo : v > lo;
    const bool below = hi_closed ? v <= hi : v < hi;
    return above && below;
  }

  /// Closure membership; differs from contains() only at open finite endpoints.
  bool closure_contains(double v) const { return !std::isnan(v) && v >= lo && v <= hi; }

  bool contains(const Interval& other) const {
    auto lo_ok = other.lo > lo || (other.lo == lo && (lo_closed || !other.lo_closed));
    auto hi_ok = other.hi < hi || (other.hi == hi && (hi_closed || !other.hi_closed));
    return lo_ok && hi_ok;
  }

  double width() const { return hi - lo; }

  std::string str() const {
    std::ostringstream os;
    os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
    return os.str();
  }
};

}  // namespace maxent
