#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kvwave/model.hpp"

namespace kvwave {

enum class Command { simulate, scan, quasimode, audit, spectrum, stationary };

std::string to_string(Command c);

struct RunConfig {
  Command command = Command::simulate;
  ModelParams params;
  std::size_t N = 512;

  // simulate
  double T = 50.0;
  double dt = 0.0;  // 0 selects h/4
  std::string init = "sine";  // sine | random
  bool smooth = false;

  // scan
  double beta_min = 1.0;
  double beta_max = 300.0;
  double beta_points = 8.0;  // per unit beta (linear) or total (log)
  bool beta_log = false;
  bool insert_quasimodes = false;
  int n_max = 0;  // 0 inserts every mode inside the range
  bool has_gamma = false;
  double gamma = 0.0;
  double tol = 1e-6;
  int max_iter = 500;

  // quasimode / audit
  std::vector<int> n_list;
  int mesh_factor = 64;
  bool strict_theta = false;
  std::vector<std::string> quantities;  // audit subset, empty = whole registry

  // spectrum / stationary
  double shift_re = 0.0, shift_im = 0.0, shift_step = 0.0;
  int probes = 1;

  std::string output;
  std::uint64_t seed = 0;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

// key=value lines or one JSON object; overrides replace parsed keys.
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

// Runs the experiment, writes the CSV to config.output and a summary to log.
// Returns the process exit status.
int run(const RunConfig& config, std::ostream& log);

inline constexpr const char* artifact_version = "1.0.0";

}  // namespace kvwave
