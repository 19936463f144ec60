#pragma once

// solve / certify / compare pipelines behind the maxent command-line tool.
//
// Exit codes: 0 success, 1 configuration error, 2 non-convergence,
// 3 failed certificate hypothesis.

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "maxent/app/config.hpp"
#include "maxent/certificate.hpp"
#include "maxent/density.hpp"
#include "maxent/dual.hpp"
#include "maxent/primal.hpp"

namespace maxent::app {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNotConverged = 2, kHypothesisFailed = 3 };

enum class CertificateType { core, qri };

inline std::string to_string(CertificateType t) { return t == CertificateType::core ? "core" : "qri"; }

/// %.17g, so reruns can be diffed byte for byte.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string solution_csv(const std::vector<SamplePoint>& table) {
  std::string out = "s,x\n";
  for (const auto& p : table) out += format_double(p.s) + "," + format_double(p.x) + "\n";
  return out;
}

inline std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::string out = "iter,residual_inf,step,dual_value\n";
  for (const auto& t : trace) {
    out += std::to_string(t.iter) + "," + format_double(t.residual_inf) + "," + format_double(t.step) + "," +
           format_double(t.dual_value) + "\n";
  }
  return out;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

struct SolveRun {
  ProblemInstance instance;
  Density rho;
  DualSolution dual;
  PrimalSolution primal;
};

inline SolveRun run_solve(const RunConfig& c, const BasisConfig& basis_cfg) {
  const auto entropy = builtin_entropy(c.entropy);
  const auto basis = make_basis(basis_cfg, c.tau);
  auto rho = make_density(c.rho, c.tau);
  auto inst = instance_from_density(entropy, basis, rho, c.quad_order, c.quad_panels);
  auto opts = solver_options(c);
  if (opts.phi0 && static_cast<std::size_t>(opts.phi0->size()) != inst.n()) {
    throw ValidationError("solver.phi0 length does not match the basis size");
  }
  auto dual = solve_dual(inst, opts);
  auto primal = reconstruct(inst, dual.mu);
  return {std::move(inst), std::move(rho), std::move(dual), std::move(primal)};
}

inline nlohmann::json solve_summary(const SolveRun& r) {
  nlohmann::json j;
  j["mu"] = to_vector(r.dual.mu);
  j["residual_inf"] = r.dual.residual_inf;
  j["dual_value"] = r.dual.dual_value;
  j["primal_value"] = r.primal.primal_value;
  j["duality_gap"] = r.primal.duality_gap;
  j["moment_residual_inf"] = r.primal.moment_residual_inf;
  j["iterations"] = r.dual.iterations;
  j["converged"] = r.dual.converged;
  j["message"] = r.dual.message;
  j["entropy"] = r.instance.entropy.name;
  j["basis"] = to_string(r.instance.basis.kind);
  j["n"] = r.instance.n();
  return j;
}

/// solution.csv, summary.json and optionally trace.csv.
inline int cmd_solve(const RunConfig& c, const std::filesystem::path& out_dir, bool trace, std::ostream& log) {
  const auto run = run_solve(c, c.basis);
  const auto grid = uniform_grid(0.0, c.tau, c.sample_points);
  write_text(out_dir / "solution.csv", solution_csv(sample_solution(run.primal, grid)));
  write_json(out_dir / "summary.json", solve_summary(run));
  if (trace) write_text(out_dir / "trace.csv", trace_csv(run.dual.trace));
  log << "solve: " << run.dual.message << " after " << run.dual.iterations
      << " iterations, residual_inf = " << format_double(run.dual.residual_inf)
      << ", duality_gap = " << format_double(run.primal.duality_gap) << "\n";
  return run.dual.converged ? kOk : kNotConverged;
}

/// Bounds for certificates: configured values, else the closure of dom f.
inline std::pair<double, double> certificate_bounds(const RunConfig& c, const EntropySpec& entropy) {
  const double alpha = c.alpha.value_or(entropy.f_domain.lo);
  const double beta = c.beta.value_or(entropy.f_domain.hi);
  if (!std::isfinite(alpha)) throw ValidationError("certify.alpha is required: dom f has no finite lower end");
  if (!entropy.f_domain.contains(bounds_interval(alpha, beta))) {
    throw ValidationError("[alpha, beta] = " + bounds_interval(alpha, beta).str() + " is not inside dom f = " +
                          entropy.f_domain.str() + "; set certify.alpha / certify.beta");
  }
  return {alpha, beta};
}

inline nlohmann::json extended(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline int cmd_certify(const RunConfig& c, CertificateType type, const std::filesystem::path& out_dir,
                       std::ostream& log) {
  const auto entropy = builtin_entropy(c.entropy);
  const auto basis = make_basis(c.basis, c.tau);
  const auto rho = make_density(c.rho, c.tau);
  const auto inst = instance_from_density(entropy, basis, rho, c.quad_order, c.quad_panels);
  const auto [alpha, beta] = certificate_bounds(c, entropy);

  CertificateOptions opts;
  opts.min_width = c.min_width;

  nlohmann::json j;
  j["type"] = to_string(type);
  j["alpha"] = extended(alpha);
  j["beta"] = extended(beta);
  j["n"] = inst.n();
  j["evidence"] = "numerical: membership and bounds checked on sample grids and quadrature nodes";
  j["zeta1"] = nullptr;
  j["zeta2"] = nullptr;
  j["eps1"] = nullptr;
  j["eps2"] = nullptr;
  j["delta"] = nullptr;
  j["t_unit"] = nullptr;
  j["m"] = nullptr;
  j["trials_passed"] = nullptr;
  j["residuals"] = nlohmann::json::object();

  const auto path = out_dir / "certificate.json";
  try {
    if (type == CertificateType::core) {
      const auto cert = build_core_certificate(inst, rho, alpha, beta, opts);
      const auto rep = verify_core_certificate(inst, rho, cert, c.trials, c.seed);
      const Eigen::MatrixXd ip = direction_inner_products(inst.basis, inst.rule, cert.y_unit);
      const double ortho = (ip - Eigen::MatrixXd::Identity(ip.rows(), ip.cols())).cwiseAbs().maxCoeff();
      j["zeta1"] = cert.margin.zeta1;
      j["zeta2"] = cert.margin.zeta2;
      j["eps1"] = cert.margin.eps1;
      j["eps2"] = cert.margin.eps2;
      j["delta"] = cert.delta;
      j["t_unit"] = cert.t_unit;
      j["trials"] = rep.trials;
      j["trials_passed"] = rep.passed;
      j["residuals"] = {{"p1_worst_violation", rep.worst_p1_violation},
                        {"p2_worst", rep.worst_p2_residual},
                        {"orthogonality", ortho}};
      const bool ok = rep.passed == rep.trials;
      j["status"] = ok ? "verified" : "verification_failed";
      write_json(path, j);
      log << "certify core: [" << format_double(cert.margin.zeta1) << ", " << format_double(cert.margin.zeta2)
          << "], " << rep.passed << "/" << rep.trials << " directions pass\n";
      return ok ? kOk : kHypothesisFailed;
    }
    const auto cert = build_qri_certificate(inst, rho, alpha, beta, c.m_max, opts);
    j["zeta1"] = cert.zeta1;
    j["zeta2"] = cert.zeta2;
    j["delta"] = cert.delta;
    j["m"] = cert.m;
    j["eps"] = cert.eps;
    j["residuals"] = {{"moment_match", cert.moment_match_residual}, {"sup_v", cert.sup_v}};
    const bool ok = cert.eps > 0 && cert.moment_match_residual <= kMomentTol;
    j["status"] = ok ? "verified" : "verification_failed";
    write_json(path, j);
    log << "certify qri: m = " << cert.m << ", eps = " << format_double(cert.eps)
        << ", moment residual = " << format_double(cert.moment_match_residual) << "\n";
    return ok ? kOk : kHypothesisFailed;
  } catch (const HypothesisError& e) {
    j["status"] = "hypothesis_failed";
    j["failed_hypotheses"] = e.failed();
    j["message"] = e.what();
    write_json(path, j);
    log << "certify " << to_string(type) << ": failed hypothesis: " << e.what() << "\n";
    return kHypothesisFailed;
  }
}

/// Default Gibbs window: split +/- 0.1 of the pulse (or basis) discontinuity.
inline std::pair<double, double> gibbs_window(const RunConfig& c) {
  if (c.window) return *c.window;
  double split = c.tau / 2;
  if (c.rho.kind == "pulse") {
    split = c.rho.split;
  } else if (c.basis.kind == "piecewise_flat") {
    split = c.basis.split;
  }
  return {std::max(0.0, split - 0.1), std::min(c.tau, split + 0.1)};
}

inline int cmd_compare(const RunConfig& c, const std::filesystem::path& out_dir, std::ostream& log) {
  if (!c.compare_basis) throw ValidationError("compare needs a 'compare_basis' section");
  const auto ra = run_solve(c, c.basis);
  const auto rb = run_solve(c, *c.compare_basis);
  if (ra.instance.n() != rb.instance.n()) throw ValidationError("compare: both bases must have the same n");

  const auto [wlo, whi] = gibbs_window(c);
  const double over_a = gibbs_overshoot(ra.primal.x, ra.rho, wlo, whi);
  const double over_b = gibbs_overshoot(rb.primal.x, rb.rho, wlo, whi);

  const auto grid = uniform_grid(0.0, c.tau, c.sample_points);
  write_text(out_dir / "solution_a.csv", solution_csv(sample_solution(ra.primal, grid)));
  write_text(out_dir / "solution_b.csv", solution_csv(sample_solution(rb.primal, grid)));

  auto run_json = [](const SolveRun& r, double over) {
    return nlohmann::json{{"basis", to_string(r.instance.basis.kind)},
                          {"n", r.instance.n()},
                          {"residual", r.dual.residual_inf},
                          {"gap", r.primal.duality_gap},
                          {"overshoot", over},
                          {"converged", r.dual.converged}};
  };
  nlohmann::json j;
  j["basis_a"] = to_string(ra.instance.basis.kind);
  j["basis_b"] = to_string(rb.instance.basis.kind);
  j["overshoot_a"] = over_a;
  j["overshoot_b"] = over_b;
  j["residuals"] = {ra.dual.residual_inf, rb.dual.residual_inf};
  j["gaps"] = {ra.primal.duality_gap, rb.primal.duality_gap};
  j["window"] = {wlo, whi};
  j["runs"] = {run_json(ra, over_a), run_json(rb, over_b)};
  write_json(out_dir / "comparison.json", j);

  log << "compare: overshoot " << j["basis_a"].get<std::string>() << " = " << format_double(over_a) << ", "
      << j["basis_b"].get<std::string>() << " = " << format_double(over_b) << "\n";
  return ra.dual.converged && rb.dual.converged ? kOk : kNotConverged;
}

/// Runs a command and maps library errors onto exit codes.
inline int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesisFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace maxent::app
