// jchsim: single-excitation Jaynes-Cummings-Hubbard chain under stochastic
// detuning disorder.
//
//   jchsim trace    --config exp.yaml --seed 7 --workers 4 --out results/
//   jchsim snapshot --config exp.yaml
//   jchsim sweep    --config sweep.yaml
//   jchsim run      --from-manifest results/manifest.yaml --out replay/

#include <CLI11.hpp>

#include <iostream>

#include "jch/cli.hpp"
#include "jch/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Jaynes-Cummings-Hubbard chain with stochastic detuning disorder"};
  app.set_version_flag("--version", jch::tool_version);
  app.require_subcommand(1);

  jch::CommandOptions options;
  std::string config;
  std::string out_dir = ".";
  std::string manifest;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master RNG seed (overrides the config)");
    sub->add_option("--workers", workers, "worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--quiet", quiet, "suppress the progress line");
  };
  for (const char* name : {"trace", "snapshot", "sweep"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
    sub->add_option("--config", config, "YAML experiment config (defaults when omitted)")->check(CLI::ExistingFile);
    add_common(sub);
  }
  auto* run = app.add_subcommand("run", "replay an experiment from a manifest");
  run->add_option("--from-manifest", manifest, "manifest.yaml written by a previous run")->required();
  add_common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  options.subcommand = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  if (!config.empty()) options.config = config;
  if (!manifest.empty()) options.from_manifest = manifest;
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--workers")) options.workers = workers;
  options.out_dir = out_dir;
  options.progress = !quiet;
  return jch::run_command(options, std::cerr);
}
