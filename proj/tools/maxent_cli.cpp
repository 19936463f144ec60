// maxent: solve, certify and compare linearly constrained entropy problems.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "maxent/app/commands.hpp"

namespace app = maxent::app;

int main(int argc, char** argv) {
  CLI::App cli{"Entropy minimization under moment constraints via the finite dual"};
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  bool trace = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_order;
  std::optional<int> quad_panels;
  std::string cert_type = "core";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides 'outputs')");
    sub->add_option("--seed", seed, "Seed for randomized verification");
    sub->add_option("--quad-order", quad_order, "Gauss-Legendre nodes per panel");
    sub->add_option("--quad-panels", quad_panels, "Panels between breakpoints");
  };

  auto* solve = cli.add_subcommand("solve", "Solve the dual and reconstruct the density");
  add_common(solve);
  solve->add_flag("--trace", trace, "Write the Newton iteration trace to trace.csv");

  auto* certify = cli.add_subcommand("certify", "Build a strong-duality certificate for rho");
  add_common(certify);
  certify->add_option("--type", cert_type, "Certificate type")->check(CLI::IsMember({"core", "qri"}));

  auto* compare = cli.add_subcommand("compare", "Solve with two bases and compare Gibbs overshoot");
  add_common(compare);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::kConfigError;
  }

  return app::guarded(
      [&]() -> int {
        auto config = app::load_config(config_path);
        if (seed) config.seed = *seed;
        if (quad_order) config.quad_order = *quad_order;
        if (quad_panels) config.quad_panels = *quad_panels;
        if (config.quad_order < 1 || config.quad_panels < 1) {
          throw maxent::ValidationError("quadrature order and panels must be >= 1");
        }
        const std::filesystem::path out = out_dir.value_or(config.outputs);

        if (solve->parsed()) return app::cmd_solve(config, out, trace, std::cout);
        if (certify->parsed()) {
          const auto type = cert_type == "qri" ? app::CertificateType::qri : app::CertificateType::core;
          return app::cmd_certify(config, type, out, std::cout);
        }
        return app::cmd_compare(config, out, std::cout);
      },
      std::cerr);
}
