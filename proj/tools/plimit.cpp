#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "plimit/commands.hpp"

namespace {

int exit_code(plimit::ErrorKind kind) {
  using plimit::ErrorKind;
  switch (kind) {
    case ErrorKind::degenerate_domain:
    case ErrorKind::no_positive_region:
    case ErrorKind::no_negative_region:
    case ErrorKind::infeasible_packing:
    case ErrorKind::ball_outside_domain:
      return 3;
    case ErrorKind::seed_failure:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limits of weighted p-Laplacian eigenvalues on planar domains"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::string field;
  std::optional<double> lambda;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out, "output path prefix");
    sub->add_option("--seed", seed, "random seed for packing heuristics");
  };
  auto* limits = app.add_subcommand("limits", "geometric limit values 1/R+, 1/R2+, -1/R-");
  auto* sweep = app.add_subcommand("sweep", "solve for the principal eigenvalue along p_list");
  auto* check = app.add_subcommand("check", "viscosity residuals of a field file");
  auto* pack = app.add_subcommand("pack", "largest common radius of k disjoint balls");
  for (auto* sub : {limits, sweep, check, pack}) common(sub);
  check->add_option("--field", field, "field file (defaults to check.field)");
  check->add_option("--lambda", lambda, "eigenvalue (defaults to check.lambda, then 1/R+)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    plimit::RunConfig cfg = plimit::load_config(config_path);
    if (out) cfg.out = *out;
    if (seed) cfg.seed = cfg.pack.seed = *seed;

    if (limits->parsed()) {
      plimit::cmd_limits(cfg, std::cout);
    } else if (sweep->parsed()) {
      const auto recs = plimit::cmd_sweep(cfg, std::cout);
      if (!plimit::sweep_ok(recs)) {
        std::cerr << "error: at least one p did not converge\n";
        return 2;
      }
    } else if (check->parsed()) {
      plimit::cmd_check(cfg, std::cout, field, lambda);
    } else if (pack->parsed()) {
      plimit::cmd_pack(cfg, std::cout);
    }
  } catch (const plimit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
