#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfdeconv/sim.hpp"
#include "gfdeconv/solvers.hpp"

namespace gfd {

/// Everything a command run needs, with defaults for every field.
///
/// Sources of values, in increasing precedence: built-in defaults, a JSON
/// config file (versioned `schema` field required), command-line flags.
/// `zeta` unset means the sample-size-driven default threshold is used.
struct RunConfig {
  double grid_L = 20.0;
  std::size_t grid_N = 1024;
  int dim = 1;

  std::size_t n = 1000;
  std::uint64_t seed = 1;
  int reps = 1;

  /// Regression curve + error channels. The instrument error defaults to
  /// Laplace(1): an ordinary-smooth law whose CF has no zeros, so every
  /// command works out of the box (a Gaussian default would push the error
  /// CF below any division threshold across most of the frequency grid).
  ModelConfig model{
      .g = {},
      .u = {.family = Family::laplace, .scale = 1.0},
      .ux = {},
      .uy = {},
  };
  DistributionSpec signal{};  ///< deconvolution target law (latent variable)

  SolverConfig solver{};
  std::optional<double> zeta;  ///< overrides solver.zeta when set

  std::vector<std::size_t> ladder{250, 1000, 4000};  ///< convergence-study sizes
  std::string pipeline = "deconvolve";  ///< convergence-study estimator choice

  std::string out_dir = ".";
};

void validate(const RunConfig& cfg);

Grid space_grid(const RunConfig& cfg);

/// Strict JSON parsing: unknown keys, a missing/unsupported schema version,
/// or invalid field values reject with std::invalid_argument.
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);
RunConfig load_config_file(const std::string& path);

/// Deterministic per-replication seed stream: one base seed plus structured
/// offsets per ladder level and replication index.
std::uint64_t replication_seed(std::uint64_t base, std::size_t level, std::size_t rep);

/// Worker threads for replication-level parallelism: the GFDECONV_THREADS
/// environment variable caps the pool (must be a positive integer when set);
/// results are reduced in replication order, so outputs do not depend on the
/// thread count.
unsigned worker_count(std::size_t jobs);

/// Executes one command, writing its artifacts (metrics.json plus
/// command-specific CSV/JSON files) into cfg.out_dir. Returns 0 on success.
/// Throws std::invalid_argument on validation failures, SolverRejection when
/// a solver declines, std::runtime_error for selftest failures and I/O.
/// Commands: simulate, deconvolve, solve-system, wellposed-demo,
/// convergence-study, selftest.
int run(const std::string& command, const RunConfig& cfg);

}  // namespace gfd
