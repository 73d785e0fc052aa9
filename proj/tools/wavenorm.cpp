#include <CLI11.hpp>
#include <iostream>

#include "wavenorm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"L2 norm growth of free waves: verification, rates, bounds and local energy"};
  app.require_subcommand(1);
  wavenorm::CommandOptions opt;
  std::string config;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "experiment config (INI)")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--seed", opt.seed, "seed for the fit noise trials");
  };
  add_common(app.add_subcommand("verify", "example reproduction and invariant checks"));
  add_common(app.add_subcommand("rates", "norm curve, rate fits and bounds"));
  add_common(app.add_subcommand("bounds", "term-by-term inequality report"));
  add_common(app.add_subcommand("local-energy", "local energy decay experiment"));
  auto* cfg = app.add_subcommand("config", "validate a config or print the default one");
  add_common(cfg);
  cfg->add_flag("--print-default", opt.print_default, "print the embedded default config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wavenorm::kExitConfig;
  }
  if (!config.empty()) opt.config_path = config;
  if (!out.empty()) opt.out_dir = out;
  return wavenorm::run_command(app.get_subcommands().front()->get_name(), opt, std::cout, std::cerr);
}
