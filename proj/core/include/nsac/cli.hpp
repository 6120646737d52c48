#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsac/scheme.hpp"

namespace nsac {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNonConvergence = 3,
  kExitIdentity = 4,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& field, const std::string& what);
  int line;  ///< 0 when not tied to a line
  std::string field;
};

/// Parsed key = value configuration. Recognised keys:
///   n, d, nu, lambda, gamma, a, epsilon, beta, dt_factor, T, steps,
///   newton_tol, newton_max_iterations, homotopy_initial_step,
///   homotopy_min_step, preset, const_c, initial_snapshot, snapshot_every,
///   n_list, seed, check_samples, check_tol_scale
/// '#' starts a comment. `steps` > 0 overrides T with a fixed step count.
struct RunConfig {
  Params params;
  int n = 8;
  std::string preset = "phase_blob";
  double const_c = 0.0;
  std::string initial_snapshot;
  int steps = 0;
  int snapshot_every = 0;
  std::vector<int> n_list{4, 8};
  std::uint64_t seed = 1;
  int check_samples = 20;
  double check_tol_scale = 1.0;
  std::string out_dir = ".";
};

/// Throws ConfigError with the offending line and key.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// Validate params, admissibility and mesh settings; throws ConfigError.
void validate_config(const RunConfig& config);

int cmd_run(const RunConfig& config, std::ostream& log);
int cmd_check(const RunConfig& config, std::ostream& log);
int cmd_study(const RunConfig& config, std::ostream& log);

}  // namespace nsac
