#include <iostream>

#include "CLI11.hpp"
#include "turnq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tabular Q-learning and exact solving for two-player zero-sum turn games"};
  app.require_subcommand(1);

  std::string config, qtable, qstar, csv;

  auto* train = app.add_subcommand("train", "train a table; writes train.csv, eval.csv, qtable.bin");
  train->add_option("config", config, "run configuration (JSON)")->required();

  auto* solve = app.add_subcommand("solve", "solve the game exactly by backward recursion");
  solve->add_option("config", config, "run configuration (JSON)")->required();
  solve->add_option("--qstar", qstar, "also save the optimal table here");

  auto* verify = app.add_subcommand("verify", "check a trained table against its configuration");
  verify->add_option("config", config, "run configuration (JSON)")->required();
  verify->add_option("qtable", qtable, "table to check")->required();

  auto* export_csv = app.add_subcommand("export-csv", "dump a table as CSV");
  export_csv->add_option("config", config, "run configuration (JSON)")->required();
  export_csv->add_option("qtable", qtable, "table to dump")->required();
  export_csv->add_option("csv", csv, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : turnq::kExitConfigError;
  }

  if (*train) return turnq::cmd_train(config, std::cout, std::cerr);
  if (*solve) return turnq::cmd_solve(config, qstar, std::cout, std::cerr);
  if (*verify) return turnq::cmd_verify(config, qtable, std::cout, std::cerr);
  return turnq::cmd_export_csv(config, qtable, csv, std::cout, std::cerr);
}
