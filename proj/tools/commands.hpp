#pragma once

#include "config.hpp"
#include "output.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pdpml::cli {

struct Options {
  std::filesystem::path out = ".";
  bool binary = false;
  int threads = 0;  // 0: all cores
  bool strict_cfl = false;
  std::vector<std::filesystem::path> inputs;  // compare: run and reference directories
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, recording into the manifest. Throws on any error.
void dispatch(const std::string& command, CliConfig cfg, const Options& opt, Manifest& m);

}  // namespace pdpml::cli
