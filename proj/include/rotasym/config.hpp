#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotasym/profile.hpp"
#include "rotasym/stepper.hpp"

namespace rotasym {

struct InitialSpec {
  enum class Kind { taylor_green, random_spectrum, file };
  Kind kind = Kind::random_spectrum;
  std::uint64_t seed = 1;
  double slope = -2.0;
  int band = 0;  // 0: n_h/4
  double amplitude = 1.0;
  std::string path;
};

struct DiagnosticsToggles {
  bool kernel_residual = true;
  bool alignment = true;
  bool coupling = false;
};

struct RunConfig {
  int nh = 32;
  int n3 = 16;
  RadialParams profile;
  SolverConfig solver;
  std::vector<double> eps_list;
  InitialSpec initial;
  std::string output_dir = "rotasym_out";
  DiagnosticsToggles diagnostics;
};

// "key = value" lines, '#' comments, dotted section prefixes. Throws
// ConfigError naming the line for unknown keys, bad values, out-of-range
// values; missing required keys (grid.nh, solver.nu, solver.eps or
// solver.eps_list) are reported with line 0.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
std::string emit_config(const RunConfig& cfg);
// FNV-1a over emit_config.
std::uint64_t config_hash(const RunConfig& cfg);
// Key reference with defaults, for --help.
std::string config_reference();

}  // namespace rotasym
