#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "optimix/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian D- and I-optimal designs for choice experiments with mixtures"};
  app.set_version_flag("--version", optimix::kVersion);
  app.require_subcommand(1);

  std::string config, design, out;
  int round_decimals = 2;

  auto* optimize = app.add_subcommand("optimize", "construct a design by coordinate exchange");
  optimize->add_option("--config", config, "run configuration (JSON)")->required();
  optimize->add_option("--out", out, "output directory (overrides out_dir)");
  optimize->add_option("--round", round_decimals, "decimals in design_rounded.csv")
      ->check(CLI::Range(0, 17));

  auto* evaluate = app.add_subcommand("evaluate", "criteria and diagnostics for a design");
  evaluate->add_option("--design", design, "design CSV")->required();
  evaluate->add_option("--config", config, "run configuration (JSON)")->required();
  evaluate->add_option("--out", out, "output directory (overrides out_dir)");

  auto* draws = app.add_subcommand("draws", "export the prior draw matrix");
  draws->add_option("--config", config, "run configuration (JSON)")->required();
  draws->add_option("--out", out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : optimix::kExitValidation;
  }

  const auto out_dir = out.empty() ? std::nullopt : std::optional<std::string>(out);
  if (optimize->parsed())
    return optimix::cmd_optimize(config, out_dir, round_decimals, std::cerr);
  if (evaluate->parsed()) return optimix::cmd_evaluate(design, config, out_dir, std::cerr);
  return optimix::cmd_draws(config, out, std::cerr);
}
