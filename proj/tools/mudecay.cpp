#include "mudecay/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  mudecay::CliOptions opt;
  CLI::App app{"Finite-truncation muon decay Hamiltonian in a magnetic field"};
  app.require_subcommand(1, 1);
  for (const auto& name : mudecay::cli_commands()) app.add_subcommand(name)->fallthrough();
  app.add_option("--config", opt.config_path, "configuration file (built-in defaults when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "overrides [run] seed");
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mudecay::kExitConfig;
  }
  opt.command = app.get_subcommands().front()->get_name();
  if (seed_opt->count()) opt.seed = seed;
  return mudecay::run(opt, std::cerr);
}
