// include/herd/experiment.hpp
//
// Monte Carlo driver: for each alpha in a grid, draw R independent taste
// populations, solve each by tatonnement, and summarize the distribution of
// equilibrium fractions.
//
// Each run owns a random stream derived from (master_seed, alpha_index,
// run_index), so results do not depend on scheduling or thread count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "herd/equilibrium.hpp"
#include "herd/model.hpp"
#include "herd/random.hpp"
#include "herd/stats.hpp"

namespace herd {

inline constexpr std::size_t kDeskAgents = 2000;
inline constexpr std::size_t kDeskRuns = 4000;
inline constexpr std::size_t kPaperAgents = 10000;
inline constexpr std::size_t kPaperRuns = 20000;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  double epsilon = 0.0;
  std::size_t n_agents = kDeskAgents;
  std::vector<double> alpha_grid;
  std::size_t runs_per_alpha = kDeskRuns;
  std::uint64_t master_seed = 0;
  std::size_t bin_count = kDefaultBinCount;
  std::size_t thread_hint = 0;  // 0 = hardware concurrency
  bool retain_populations = false;

  /// Throws ConfigError on an empty or non-increasing grid, negative alpha,
  /// zero runs, agents or bins, or a non-finite epsilon.
  void validate() const;

  ModelParams params_for(double alpha) const { return {alpha, epsilon, n_agents}; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Seed of the stream for one run:
///   h = mix64(master_seed + G)
///   h = mix64(h ^ (alpha_index + G))
///   h = mix64(h ^ (run_index + G))
/// with G = 0x9E3779B97F4A7C15 and mix64 the SplitMix64 finalizer.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t alpha_index,
                          std::uint64_t run_index) noexcept;

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t alpha_index,
                           std::uint64_t run_index);

/// Draws a population, solves it, and checks the result against the
/// linear-scan equilibrium test before returning. The population is moved
/// into *retained when that pointer is non-null.
EquilibriumOutcome run_single(const ModelParams& params, RandomStream& stream,
                              std::optional<TastePopulation>* retained = nullptr);

struct RunFailure {
  std::size_t alpha_index = 0;
  std::size_t run_index = 0;
  std::string message;
};

/// Raised after a batch or sweep finishes if any run failed; carries every
/// failure with its indices.
class RunFailureError : public std::runtime_error {
 public:
  explicit RunFailureError(std::vector<RunFailure> failures);
  const std::vector<RunFailure>& failures() const noexcept { return failures_; }

 private:
  std::vector<RunFailure> failures_;
};

struct RunDistribution {
  double alpha = 0.0;
  std::vector<EquilibriumOutcome> outcomes;    // indexed by run
  std::vector<TastePopulation> populations;    // only when retained

  std::vector<double> k_hats() const;
  std::vector<double> t_hats() const;
};

struct BatchOptions {
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool retain_populations = false;
};

RunDistribution run_batch(const ModelParams& params, std::size_t runs, std::uint64_t master_seed,
                          std::size_t alpha_index, const BatchOptions& options = {});

struct AlphaResult {
  RunDistribution runs;
  MomentSummary summary;
  Histogram histogram;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<AlphaResult> per_alpha;  // grid order
  double wall_seconds = 0.0;
};

using SweepProgress = std::function<void(std::size_t alpha_index, const AlphaResult&)>;

/// Runs every grid point. A failing run does not stop the other grid points,
/// but the sweep throws RunFailureError at the end listing all failures.
SweepResult sweep_alpha(const ExperimentConfig& config, const SweepProgress& progress = {});

std::size_t resolve_thread_count(std::size_t hint) noexcept;

}  // namespace herd
