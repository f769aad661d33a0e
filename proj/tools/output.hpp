#pragma once

#include "pdpml/grid.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdpml::cli {

struct Dump {
  double h = 0.0, t = 0.0;
  RealField u;  // u(i1, i2)
};

/// Text: header line "nx ny h t", then one line per i2 with the nx values
/// along i1. Binary: the same values as little-endian doubles in the .bin
/// file and the header line in a sidecar .hdr file.
void write_dump(const std::filesystem::path& path, const RealField& u, double h, double t);
void write_dump_binary(const std::filesystem::path& bin, const RealField& u, double h, double t);

/// Reads either format; a .bin path looks for its .hdr sidecar.
Dump read_dump(const std::filesystem::path& path);

/// Run record: resolved config, timings per phase and the files written. It is
/// written when a command starts and rewritten whenever it changes.
class Manifest {
 public:
  Manifest(std::filesystem::path dir, std::string command, std::string config_text);

  const std::filesystem::path& dir() const { return dir_; }
  /// Registers a file relative to the output directory and returns its full path.
  std::filesystem::path output(const std::string& name);
  void timing(const std::string& phase, double seconds);
  void info(const std::string& key, nlohmann::json value);
  void finish(bool ok, const std::string& error = {});
  const nlohmann::json& json() const { return j_; }

 private:
  void write() const;
  std::filesystem::path dir_;
  nlohmann::json j_;
};

/// Wall-clock seconds of a monotonic clock since construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace pdpml::cli
