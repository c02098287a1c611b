#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace bmc::cli {

/// Parsed command-line configuration.  Flags override an optional flat
/// key=value config file, which overrides these defaults; *_given records
/// whether the user set a value explicitly so the per-sweep defaults can
/// fill in the rest.
struct RunConfig {
  std::string command;  // solve | sweep | validate

  std::string method = "backward";  // forward | backward | both (sweep only)
  std::string scheme = "low";       // low | high | both (sweep only)
  std::int64_t n_particles = 20000;
  int n_bins = 20;
  double dt = 1e-3;
  double horizon = 0.1;  // --T
  double x0 = -0.9;
  double T0 = 0.1;
  double x_query = std::numeric_limits<double>::quiet_NaN();  // default: x0
  std::string query_range;  // lo:hi:count
  std::uint64_t seed = 1;
  int repeats = 8;
  int threads = 0;  // 0 = hardware concurrency
  bool plot = false;
  bool paper_scale = false;
  std::string boundary = "reflect";  // reflect | clamp
  std::string launch = "grid";       // grid | uniform | phi
  std::string bin_range;             // lo:hi, forward binning window
  std::string out;                   // output path (base name for sweeps)
  std::string sweep_param;           // n | nbin | dt

  bool n_given = false;
  bool n_bins_given = false;
  bool dt_given = false;
  bool method_given = false;
  bool x_query_given = false;
};

/// Normalizes defaults and cross-checks the configuration.  Returns an
/// error message for invalid input (the caller exits with status 2).
std::optional<std::string> validate_config(RunConfig& config);

int cmd_solve(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_validate(const RunConfig& config);

}  // namespace bmc::cli
