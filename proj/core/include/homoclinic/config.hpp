#pragma once

#include "homoclinic/minimax.hpp"
#include "homoclinic/verify.hpp"

#include <stdexcept>
#include <string>

namespace homoclinic {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated run configuration with documented defaults. The empty document
/// yields the defaults below.
struct RunConfig {
  std::string problem_name = "paper-example";
  double problem_a = 3.0;
  int problem_dim = 1;

  double grid_T = 12.0;
  int grid_n = 2399;

  SolveConfig solver;   // includes seed and the m0 sampling plan
  VerifyConfig verify;
  std::string out_dir = "out";
};

/// Parses a JSON config document. Unknown keys are rejected with a nearest
/// known-key suggestion; validation errors name the offending key (e.g.
/// "grid.T"). Throws ConfigError.
RunConfig parse_config(const std::string& text);

/// Reads and parses a config file; empty path yields the defaults.
RunConfig load_config_file(const std::string& path);

/// Instantiates the selected built-in problem.
ProblemSpec make_problem(const RunConfig& cfg);

}  // namespace homoclinic
