#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bykov/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Return-map toolbox for a symmetry-broken heteroclinic cycle "
               "between two saddle-foci"};
  app.require_subcommand(1);
  app.fallthrough();

  bykov::CliFlags flags;
  app.add_option("--config", flags.config_path,
                 "flat key=value model configuration file");
  app.add_option("--out", flags.out_path, "output path (default: stdout)");
  app.add_option("--csv-dir", flags.csv_dir, "directory for CSV sidecars");
  app.add_option("--jobs", flags.jobs, "worker threads (default 1)");
  app.add_option("--seed", flags.seed, "RNG seed for sampled commands");
  app.add_option("--lambda", flags.lambda, "unfolding parameter");
  app.add_option("--lambda-hi", flags.lambda_hi, "upper end of a lambda range");
  app.add_option("--lambda-lo", flags.lambda_lo, "lower end of a lambda range");
  app.add_option("--strip", flags.strip, "strip / branch index");
  app.add_option("--pulse", flags.pulse, "pulse level for tangency search");
  app.add_option("--depth", flags.depth,
                 "extra strips / recursion depth / grid size");
  app.add_option("--max-iters", flags.max_iters, "iteration budget");
  app.add_option("--format", flags.format, "jsonl or csv (default jsonl)")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  app.add_subcommand("validate", "check parameters, print derived constants");
  app.add_subcommand("sweep", "classify one strip pair over a lambda grid");
  app.add_subcommand("tangency", "find multi-pulse tangency events");
  app.add_subcommand("strips", "horizontal strip heights and windows");
  app.add_subcommand("classify", "intersection classes for a strip matrix");
  app.add_subcommand("delta", "horseshoe creation/destruction interval");
  app.add_subcommand("orbit", "iterate the return map from a strip center");
  app.add_subcommand("fixedpoints", "fixed points on one branch");
  app.add_subcommand("bifurcate", "saddle-node and flip events on a branch");
  app.add_subcommand("cover", "covering relations between strips");
  app.add_subcommand("entropy", "entropy proxy from covering relations");
  app.add_subcommand("escape", "survival fractions of sampled orbits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return bykov::run_command(app.get_subcommands().front()->get_name(), flags);
}
