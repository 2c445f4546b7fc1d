#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using lumprank::cli::CliConfig;
  CLI::App app{"PageRank by lumping dangling nodes, with dense verification labs"};
  app.require_subcommand(1);
  CliConfig cfg;

  const auto add_solver_options = [&cfg](CLI::App* sub) {
    sub->add_option("graph", cfg.graph_path, "Edge-list file (\"src dst\" per line)")->required();
    sub->add_option("--alpha", cfg.alpha, "Damping factor in (0, 1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--v", cfg.v_spec, "Personalization vector: 'uniform' or a file")
        ->capture_default_str();
    sub->add_option("--w", cfg.w_spec, "Dangling-node vector: 'uniform' or a file")
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "1-norm stopping tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "Iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* rank = app.add_subcommand("rank", "Rank nodes with the lumped solver");
  add_solver_options(rank);
  rank->add_option("--top", cfg.top, "Print only the top N nodes");

  auto* compare = app.add_subcommand("compare", "Run the lumped and full solvers side by side");
  add_solver_options(compare);

  auto* verify = app.add_subcommand("verify", "Check the lumping identities on the dense matrix");
  add_solver_options(verify);
  verify->add_option("--dense-limit", cfg.dense_limit, "Largest n handled densely")
      ->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Seed for sampled spectrum points")->capture_default_str();
  verify->add_flag("--decomposition", cfg.decomposition_only,
                   "Run only the LDU / stochastic complement checks");
  verify->add_flag("--negative-control", cfg.negative_control,
                   "Also run corrupted inputs that must fail");

  auto* gen = app.add_subcommand("gen", "Emit a random edge list");
  gen->add_option("--nodes", cfg.nodes, "Node count")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--dangling-frac", cfg.dangling_frac, "Fraction of pages without outlinks")
      ->capture_default_str();
  gen->add_option("--avg-degree", cfg.avg_degree, "Mean out-degree of linked pages")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lumprank::cli::kExitInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return lumprank::cli::run(cfg, std::cout, std::cerr);
}
