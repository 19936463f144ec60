#pragma once

// Column-oriented text tables and piecewise-linear interpolation over them.
//
// Format: one sample per line, first column s, remaining columns values,
// separated by whitespace and/or commas. Lines starting with '#' are
// comments, except "# breakpoints: b1 b2 ..." which declares jump points.
// A jump at s is encoded by two consecutive rows with the same s.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent {

struct Table {
  std::vector<double> s;
  std::vector<std::vector<double>> columns;  // columns[c][row]
  std::vector<double> breakpoints;
};

namespace detail {

inline std::vector<double> parse_numbers(std::string line, const std::string& context) {
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream is(line);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(context + ": cannot parse number '" + tok + "'");
    }
  }
  return out;
}

}  // namespace detail

inline Table read_table(std::istream& in, const std::string& context = "table") {
  Table t;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto key = line.find("breakpoints:");
      if (key != std::string::npos) {
        auto bps = detail::parse_numbers(line.substr(key + 12), context);
        t.breakpoints.insert(t.breakpoints.end(), bps.begin(), bps.end());
      }
      continue;
    }
    auto row = detail::parse_numbers(line, context);
    if (row.size() < 2) throw ValidationError(context + ": each row needs s and at least one value");
    if (width == 0) {
      width = row.size();
      t.columns.assign(width - 1, {});
    } else if (row.size() != width) {
      throw ValidationError(context + ": ragged row (expected " + std::to_string(width) + " columns)");
    }
    if (!t.s.empty() && row[0] < t.s.back()) throw ValidationError(context + ": s column must be nondecreasing");
    for (double v : row)
      if (!std::isfinite(v)) throw ValidationError(context + ": non-finite entry");
    t.s.push_back(row[0]);
    for (std::size_t c = 1; c < width; ++c) t.columns[c - 1].push_back(row[c]);
  }
  if (t.s.size() < 2) throw ValidationError(context + ": need at least two rows");
  std::sort(t.breakpoints.begin(), t.breakpoints.end());
  t.breakpoints.erase(std::unique(t.breakpoints.begin(), t.breakpoints.end()), t.breakpoints.end());
  return t;
}

inline Table read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open table file '" + path + "'");
  return read_table(in, path);
}

/// Piecewise-linear interpolant of one table column, constant beyond the ends.
class PiecewiseLinear {
public:
  PiecewiseLinear(std::vector<double> s, std::vector<double> v)
      : data_(std::make_shared<const Data>(Data{std::move(s), std::move(v)})) {}

  double operator()(double x) const {
    const auto& s = data_->s;
    const auto& v = data_->v;
    if (x <= s.front()) return v.front();
    if (x >= s.back()) return v.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), x) - s.begin());
    const std::size_t lo = hi - 1;
    const double h = s[hi] - s[lo];
    if (h <= 0.0) return v[hi];
    const double w = (x - s[lo]) / h;
    return (1.0 - w) * v[lo] + w * v[hi];
  }

private:
  struct Data {
    std::vector<double> s, v;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace maxent
