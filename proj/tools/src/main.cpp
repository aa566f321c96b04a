#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace afgas::cli;
  CLI::App app{"Ground states of the average-field anyon functional"};
  app.require_subcommand(1);

  std::string config_path, out;
  int threads = 0;
  std::uint64_t seed = 0;
  bool plot = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed for initial states");
    sub->add_flag("--plot", plot, "also write PGM density images");
  };
  for (const char* name : {"solve", "thermo", "tf", "lda", "check"}) {
    static const std::map<std::string, std::string> help = {
        {"solve", "minimise at one coupling"},
        {"thermo", "estimate e(1,1) from box sweeps"},
        {"tf", "Thomas-Fermi energies for a trap"},
        {"lda", "trapped sweep compared with Thomas-Fermi"},
        {"check", "quick invariant suite"}};
    common(app.add_subcommand(name, help.at(name)));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (!out.empty()) cfg.out = out;
  if (threads > 0) cfg.threads = threads;
  if (app.get_subcommands().front()->count("--seed")) cfg.seed = seed;

  CommandOptions opt;
  opt.plot = plot;
  opt.log = &std::cerr;
  return run_command(app.get_subcommands().front()->get_name(), cfg, opt);
}
