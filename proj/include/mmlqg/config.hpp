#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmlqg/params.hpp"

namespace mmlqg {

// Run configuration: every ModelParams field plus the grid size and the
// documented study settings. The file format is `key = value` lines with
// `#` comments; unknown keys are rejected by name.
struct RunConfig {
  ModelParams model;
  int M = 2000;
  int N = 64;
  std::vector<int> N_list = {8, 32, 128, 512};
  std::vector<int> gap_N_list = {16, 64, 256};
  int n_paths = 400;
  std::uint64_t seed = 946301;
  int workers = 0;  // 0 = hardware concurrency
  double state_cap = 1e6;
  std::string responder_k = "recomputed";  // or "frozen"
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// Key/value echo in file order, used for the summary and for tests.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c);

}  // namespace mmlqg
