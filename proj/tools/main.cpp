#include <CLI11.hpp>

#include <iostream>

#include "nsac/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes-Allen-Cahn DG/FE solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int snapshot_every = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
  };
  CLI::App* run = app.add_subcommand("run", "time-step a preset or snapshot, write energy.csv and snapshots");
  add_common(run);
  run->add_option("--snapshot-every", snapshot_every, "write a field snapshot every S steps");
  CLI::App* check = app.add_subcommand("check", "run the seeded identity battery");
  add_common(check);
  check->add_option("--seed", seed, "random seed");
  CLI::App* study = app.add_subcommand("study", "reference convergence study, writes study.csv");
  add_common(study);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nsac::kExitConfig;
  }

  nsac::RunConfig config;
  try {
    config = nsac::load_config(config_path);
  } catch (const nsac::ConfigError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return nsac::kExitConfig;
  }
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (check->count("--seed") > 0) config.seed = seed;
  if (snapshot_every >= 0) config.snapshot_every = snapshot_every;

  if (run->parsed()) return nsac::cmd_run(config, std::cout);
  if (check->parsed()) return nsac::cmd_check(config, std::cout);
  return nsac::cmd_study(config, std::cout);
}
