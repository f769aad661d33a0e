#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace pdpml::cli;
  CLI::App app{"Peridynamic scalar wave solver with a discrete perfectly matched layer"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  Options opt;
  std::string out = ".";
  app.add_option("--config", config, "key = value configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (created if missing)");
  app.add_option("--threads", opt.threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  app.add_flag("--strict-cfl", opt.strict_cfl, "reject time steps above the CFL bound");
  app.add_flag("--binary", opt.binary, "write snapshot dumps as little-endian doubles");

  std::vector<std::string> inputs;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    if (name == "compare")
      sub->add_option("dirs", inputs, "run output directory, then reference output directory")
          ->expected(2)
          ->required()
          ->check(CLI::ExistingDirectory);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  opt.out = out;
  for (const auto& d : inputs) opt.inputs.emplace_back(d);

  CliConfig cfg;
  try {
    cfg = parse_config_file(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    Manifest m(opt.out, command, serialize_config(cfg));
    try {
      dispatch(command, cfg, opt, m);
      m.finish(true);
    } catch (const std::exception& e) {
      m.finish(false, e.what());
      throw;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
