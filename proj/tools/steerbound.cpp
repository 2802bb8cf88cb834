#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "steerbound/cli.hpp"

namespace {

using steerbound::cli::Command;
using steerbound::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--kind", cfg.kind, "mub | clifford | dichotomic | random");
  sub->add_option("--d", cfg.d, "dimension (comma-separated range for sweep)")->delimiter(',');
  sub->add_option("--n", cfg.n, "number of settings (comma-separated range for sweep)")->delimiter(',');
  sub->add_option("--seed", cfg.seed, "seed for random functionals and see-saw restarts")->capture_default_str();
  sub->add_flag("--paper-dim", cfg.paper_dim, "use 2^n-dimensional Clifford observables");
  sub->add_option("--cap", cfg.cap, "strategy enumeration cap")->capture_default_str();
  sub->add_option("--restarts", cfg.restarts, "see-saw restarts")->capture_default_str();
  sub->add_option("--max-iters", cfg.max_iters, "see-saw iteration limit")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "see-saw convergence tolerance")->capture_default_str();
  sub->add_option("--angular-res", cfg.angular_res, "numerical-radius grid size")->capture_default_str();
  sub->add_option("--threads", cfg.threads, "worker threads (0: STEERBOUND_THREADS or 1)")->capture_default_str();
  sub->add_option("--out", cfg.out, "output file (default: standard output)");
  sub->add_option("--format", cfg.format, "json | csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steerbound: steering-functional bounds and violation scaling"};
  app.set_version_flag("--version", steerbound::kVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  auto* generate = app.add_subcommand("generate", "write a steering functional as JSON");
  auto* bounds = app.add_subcommand("bounds", "compute LHS and quantum bounds of a functional file");
  auto* sweep = app.add_subcommand("sweep", "violation scaling table over a parameter range");
  auto* verify = app.add_subcommand("verify", "run the property suite");
  for (auto* sub : {generate, bounds, sweep, verify}) add_common(sub, cfg);
  bounds->add_option("--in", cfg.in, "functional JSON file")->required();
  verify->add_option("--filter", cfg.filter, "run only groups whose name contains this string");
  verify->add_option("--perturb-mub", cfg.perturb_mub, "scale one MUB vector by (1 + value) before checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : steerbound::cli::kUsage;
  }

  if (generate->parsed()) cfg.command = Command::generate;
  if (bounds->parsed()) cfg.command = Command::bounds;
  if (sweep->parsed()) cfg.command = Command::sweep;
  if (verify->parsed()) cfg.command = Command::verify;
  return steerbound::cli::run(cfg, std::cout, std::cerr);
}
