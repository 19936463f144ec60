#pragma once

// Run configuration for the command-line front end (JSON, nested sections).

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxent/density.hpp"
#include "maxent/dual.hpp"
#include "maxent/entropy.hpp"
#include "maxent/errors.hpp"
#include "maxent/moments.hpp"

namespace maxent::app {

struct BasisConfig {
  std::string kind = "monomial";
  int n = 0;
  double split = 0.5;
  std::string file;
};

struct RhoConfig {
  std::string kind = "pulse";
  double split = 0.5;
  double value = 0.5;
  std::string file;
};

struct RunConfig {
  std::string entropy;
  double tau = 1.0;
  BasisConfig basis;
  std::optional<BasisConfig> compare_basis;
  RhoConfig rho;
  int quad_order = kDefaultQuadOrder;
  int quad_panels = kDefaultQuadPanels;
  double tol = 1e-10;
  int max_iter = 100;
  std::optional<std::vector<double>> phi0;
  std::string outputs = "out";
  int sample_points = 1001;
  std::uint64_t seed = 0;
  // certify
  std::optional<double> alpha;
  std::optional<double> beta;
  int trials = 100;
  int m_max = 100000;
  double min_width = 0.0;
  // compare
  std::optional<std::pair<double, double>> window;
};

namespace detail {

inline double read_extended(const nlohmann::json& j, const std::string& key) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
    throw ValidationError("'" + key + "' must be a number or \"inf\"");
  }
  if (!j.is_number()) throw ValidationError("'" + key + "' must be a number");
  return j.get<double>();
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("config field '" + where + key + "' has the wrong type");
  }
}

inline std::string resolve(const std::string& path, const std::filesystem::path& base) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute() || base.empty()) return p.string();
  return (base / p).string();
}

inline BasisConfig parse_basis(const nlohmann::json& j, const std::string& where, const std::filesystem::path& base) {
  if (!j.is_object()) throw ValidationError("config section '" + where + "' must be an object");
  BasisConfig b;
  b.kind = get_or<std::string>(j, "kind", b.kind, where + ".");
  b.n = get_or<int>(j, "n", 0, where + ".");
  b.split = get_or<double>(j, "split", b.split, where + ".");
  b.file = resolve(get_or<std::string>(j, "file", "", where + "."), base);
  if (b.kind != "monomial" && b.kind != "piecewise_flat" && b.kind != "tabulated") {
    throw ValidationError(where + ".kind must be monomial, piecewise_flat or tabulated");
  }
  if (b.kind == "tabulated") {
    if (b.file.empty()) throw ValidationError(where + ".file is required for a tabulated basis");
  } else if (b.n < 1) {
    throw ValidationError(where + ".n must be >= 1");
  }
  return b;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = {}) {
  using detail::get_or;
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig c;
  if (!j.contains("entropy")) throw ValidationError("config field 'entropy' is required");
  c.entropy = get_or<std::string>(j, "entropy", "", "");
  builtin_entropy(c.entropy);  // validates the name
  c.tau = get_or<double>(j, "tau", c.tau, "");
  if (!(c.tau > 0) || !std::isfinite(c.tau)) throw ValidationError("tau must be positive and finite");

  if (!j.contains("basis")) throw ValidationError("config section 'basis' is required");
  c.basis = detail::parse_basis(j.at("basis"), "basis", base);
  if (j.contains("compare_basis")) c.compare_basis = detail::parse_basis(j.at("compare_basis"), "compare_basis", base);

  if (j.contains("rho")) {
    const auto& r = j.at("rho");
    if (!r.is_object()) throw ValidationError("config section 'rho' must be an object");
    c.rho.kind = get_or<std::string>(r, "kind", c.rho.kind, "rho.");
    c.rho.split = get_or<double>(r, "split", c.rho.split, "rho.");
    c.rho.value = get_or<double>(r, "value", c.rho.value, "rho.");
    c.rho.file = detail::resolve(get_or<std::string>(r, "file", "", "rho."), base);
    if (c.rho.kind != "pulse" && c.rho.kind != "constant" && c.rho.kind != "tabulated") {
      throw ValidationError("rho.kind must be pulse, constant or tabulated");
    }
    if (c.rho.kind == "tabulated" && c.rho.file.empty()) throw ValidationError("rho.file is required");
  }

  if (j.contains("quad")) {
    const auto& q = j.at("quad");
    c.quad_order = get_or<int>(q, "order", c.quad_order, "quad.");
    c.quad_panels = get_or<int>(q, "panels", c.quad_panels, "quad.");
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    c.tol = get_or<double>(s, "tol", c.tol, "solver.");
    c.max_iter = get_or<int>(s, "max_iter", c.max_iter, "solver.");
    if (s.contains("phi0") && !s.at("phi0").is_null()) c.phi0 = get_or<std::vector<double>>(s, "phi0", {}, "solver.");
  }
  c.outputs = get_or<std::string>(j, "outputs", c.outputs, "");
  c.sample_points = get_or<int>(j, "sample_points", c.sample_points, "");
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "");

  if (j.contains("certify")) {
    const auto& q = j.at("certify");
    if (q.contains("alpha") && !q.at("alpha").is_null()) c.alpha = detail::read_extended(q.at("alpha"), "certify.alpha");
    if (q.contains("beta") && !q.at("beta").is_null()) c.beta = detail::read_extended(q.at("beta"), "certify.beta");
    c.trials = get_or<int>(q, "trials", c.trials, "certify.");
    c.m_max = get_or<int>(q, "m_max", c.m_max, "certify.");
    c.min_width = get_or<double>(q, "min_width", c.min_width, "certify.");
  }
  if (j.contains("gibbs") && j.at("gibbs").contains("window")) {
    const auto w = get_or<std::vector<double>>(j.at("gibbs"), "window", {}, "gibbs.");
    if (w.size() != 2 || !(w[0] < w[1])) throw ValidationError("gibbs.window must be [lo, hi] with lo < hi");
    c.window = std::make_pair(w[0], w[1]);
  }

  if (c.quad_order < 1 || c.quad_panels < 1) throw ValidationError("quad.order and quad.panels must be >= 1");
  if (!(c.tol > 0)) throw ValidationError("solver.tol must be positive");
  if (c.max_iter < 0) throw ValidationError("solver.max_iter must be >= 0");
  if (c.sample_points < 0) throw ValidationError("sample_points must be >= 0");
  if (c.trials < 0) throw ValidationError("certify.trials must be >= 0");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path());
}

inline MomentBasis make_basis(const BasisConfig& b, double tau) {
  if (b.kind == "monomial") return monomial_basis(b.n, 0.0, tau);
  if (b.kind == "piecewise_flat") return piecewise_flat_basis(b.n, b.split, 0.0, tau);
  auto basis = tabulated_basis(read_table_file(b.file), 0.0, tau);
  if (b.n > 0 && static_cast<std::size_t>(b.n) != basis.size()) {
    throw ValidationError("basis.n = " + std::to_string(b.n) + " but the table has " +
                          std::to_string(basis.size()) + " function columns");
  }
  return basis;
}

inline Density make_density(const RhoConfig& r, double tau) {
  if (r.kind == "pulse") {
    if (!(r.split > 0 && r.split < tau)) throw ValidationError("rho.split must lie strictly inside (0, tau)");
    return pulse(r.split);
  }
  if (r.kind == "constant") return constant_density(r.value);
  return tabulated_density(read_table_file(r.file));
}

inline SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  if (c.phi0) o.phi0 = Eigen::Map<const Eigen::VectorXd>(c.phi0->data(), static_cast<Eigen::Index>(c.phi0->size()));
  return o;
}

inline std::string basis_label(const BasisConfig& b) { return b.kind; }

}  // namespace maxent::app
