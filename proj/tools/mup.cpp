// mup: command-line driver. One subcommand per experiment; see README.

#include <omp.h>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mup/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of uncertainty principles on manifolds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mup::kToolVersion);

  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  int threads = 0;
  for (const auto& [name, help] : std::initializer_list<std::pair<std::string, std::string>>{
           {"constants", "estimate the admissibility constants L and C of an embedding"},
           {"verify", "uncertainty products across a field family"},
           {"scaling", "sharp-scaling experiment on the stretched circle"},
           {"inverse", "constructive inverse map and its lower bound"},
           {"degenerate", "k-th power graph with the 2/k exponent"},
           {"disconnected", "product on a disjoint union"},
           {"n2check", "compare C from N = 2 with larger configurations"},
           {"run", "dispatch on run.experiment in the config"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override run.seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  if (threads > 0) omp_set_num_threads(threads);
  try {
    auto config = mup::RunConfig::load(config_path);
    if (seed >= 0) config.set("run.seed", std::to_string(seed));
    const std::string command = name == "run" ? config.require("run.experiment") : name;
    return mup::execute(command, config, out_dir);
  } catch (const mup::Error& e) {
    std::cerr << "error [" << mup::to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  }
}
