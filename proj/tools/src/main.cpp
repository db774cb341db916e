#include <iostream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"conewolff: numerical experiments for averages over space curves and cone decoupling"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("config", config_path, "key = value config with [sections]")->required();
  auto* list = app.add_subcommand("list", "list experiments and the config keys they read");
  auto* self = app.add_subcommand("selftest", "run the fast built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*run) return conewolff::cli::run(config_path, std::cout, std::cerr);
  if (*list) {
    std::cout << conewolff::cli::list_experiments();
    return 0;
  }
  if (*self) return conewolff::cli::selftest(std::cout);
  return 1;
}
