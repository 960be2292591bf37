// chainwave: solitary traveling waves in FPU chains with M-neighbour interactions.
//
//   chainwave solve    --config run.json [--epsilon 0.1] [--output wave.csv]
//   chainwave sweep    --config run.json --format csv
//   chainwave simulate --config run.json
//   chainwave verify   --config run.json

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "chainwave/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Traveling waves in FPU chains: solve, sweep, simulate, verify"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::string format;
  double epsilon = 0.0;
  bool quiet = false;

  for (const char* name : {"solve", "sweep", "simulate", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--output", output, "output file (default: config output.path, else stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--epsilon", epsilon, "overrides solver.epsilon");
    sub->add_flag("--quiet", quiet, "suppress warnings and diagnostics on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : chainwave::kExitConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  chainwave::CommandOptions options;
  options.quiet = quiet;
  if (sub->count("--output")) options.output = output;
  if (sub->count("--format")) options.format = chainwave::parse_format(format);
  if (sub->count("--epsilon")) options.epsilon = epsilon;
  return chainwave::run_command(sub->get_name(), config_path, options, std::cout, std::cerr);
}
