#include "herd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace herd {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::string describe(const std::vector<RunFailure>& failures) {
  std::ostringstream os;
  os << failures.size() << " run(s) failed";
  const std::size_t shown = std::min<std::size_t>(failures.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    os << "; alpha_index=" << failures[i].alpha_index << " run_index=" << failures[i].run_index
       << ": " << failures[i].message;
  }
  if (failures.size() > shown) os << "; ...";
  return os.str();
}

// Calls body(i) for i in [0, count) on up to `threads` workers. Exceptions
// are caught per index and reported through on_error.
template <class Body, class OnError>
void parallel_for(std::size_t count, std::size_t threads, Body&& body, OnError&& on_error) {
  auto work = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (const std::exception& e) {
        on_error(i, e.what());
      }
    }
  };
  std::atomic<std::size_t> next{0};
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    work(next);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] { work(next); });
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (alpha_grid.empty()) {
    throw ConfigError("alpha grid is empty");
  }
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    const double a = alpha_grid[i];
    if (!std::isfinite(a) || a < 0.0) {
      throw ConfigError("alpha values must be finite and nonnegative");
    }
    if (i > 0 && !(a > alpha_grid[i - 1])) {
      throw ConfigError("alpha grid must be strictly increasing");
    }
  }
  if (!std::isfinite(epsilon)) throw ConfigError("epsilon must be finite");
  if (n_agents < 1) throw ConfigError("agents must be at least 1");
  if (runs_per_alpha < 1) throw ConfigError("runs must be at least 1");
  if (bin_count < 1) throw ConfigError("bins must be at least 1");
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t alpha_index,
                          std::uint64_t run_index) noexcept {
  std::uint64_t h = mix64(master_seed + kGolden);
  h = mix64(h ^ (alpha_index + kGolden));
  return mix64(h ^ (run_index + kGolden));
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t alpha_index,
                           std::uint64_t run_index) {
  return RandomStream(stream_seed(master_seed, alpha_index, run_index));
}

EquilibriumOutcome run_single(const ModelParams& params, RandomStream& stream,
                              std::optional<TastePopulation>* retained) {
  params.validate();
  TastePopulation pop = draw_population(params, stream);
  const EquilibriumOutcome out = tatonnement(pop, params.alpha);
  if (!verify_equilibrium(pop, params.alpha, out.k_hat)) {
    throw std::logic_error("tatonnement returned a non-equilibrium k=" + std::to_string(out.k_hat));
  }
  if (retained != nullptr) {
    retained->emplace(std::move(pop));
  }
  return out;
}

RunFailureError::RunFailureError(std::vector<RunFailure> failures)
    : std::runtime_error(describe(failures)), failures_(std::move(failures)) {}

std::vector<double> RunDistribution::k_hats() const {
  std::vector<double> k(outcomes.size());
  std::transform(outcomes.begin(), outcomes.end(), k.begin(),
                 [](const EquilibriumOutcome& o) { return o.k_hat; });
  return k;
}

std::vector<double> RunDistribution::t_hats() const {
  std::vector<double> t(outcomes.size());
  std::transform(outcomes.begin(), outcomes.end(), t.begin(),
                 [](const EquilibriumOutcome& o) { return o.t_hat; });
  return t;
}

std::size_t resolve_thread_count(std::size_t hint) noexcept {
  if (hint > 0) return hint;
  return std::max(1u, std::thread::hardware_concurrency());
}

RunDistribution run_batch(const ModelParams& params, std::size_t runs, std::uint64_t master_seed,
                          std::size_t alpha_index, const BatchOptions& options) {
  if (runs < 1) {
    throw ConfigError("run_batch: runs must be at least 1");
  }
  params.validate();

  RunDistribution dist;
  dist.alpha = params.alpha;
  dist.outcomes.resize(runs);
  std::vector<std::optional<TastePopulation>> kept(options.retain_populations ? runs : 0);

  std::mutex failure_mutex;
  std::vector<RunFailure> failures;
  parallel_for(
      runs, resolve_thread_count(options.threads),
      [&](std::size_t run) {
        RandomStream stream = derive_stream(master_seed, alpha_index, run);
        dist.outcomes[run] =
            run_single(params, stream, options.retain_populations ? &kept[run] : nullptr);
      },
      [&](std::size_t run, const char* what) {
        const std::lock_guard lock(failure_mutex);
        failures.push_back({alpha_index, run, what});
      });

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end(),
              [](const RunFailure& a, const RunFailure& b) { return a.run_index < b.run_index; });
    throw RunFailureError(std::move(failures));
  }
  if (options.retain_populations) {
    dist.populations.reserve(runs);
    for (auto& p : kept) dist.populations.push_back(std::move(*p));
  }
  return dist;
}

SweepResult sweep_alpha(const ExperimentConfig& config, const SweepProgress& progress) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  SweepResult result;
  result.config = config;
  result.per_alpha.reserve(config.alpha_grid.size());
  const BatchOptions options{config.thread_hint, config.retain_populations};

  std::vector<RunFailure> failures;
  for (std::size_t i = 0; i < config.alpha_grid.size(); ++i) {
    try {
      AlphaResult entry;
      entry.runs = run_batch(config.params_for(config.alpha_grid[i]), config.runs_per_alpha,
                             config.master_seed, i, options);
      const auto k = entry.runs.k_hats();
      entry.summary = summarize(k);
      entry.histogram = build_histogram(k, config.bin_count);
      result.per_alpha.push_back(std::move(entry));
      if (progress) progress(i, result.per_alpha.back());
    } catch (const RunFailureError& e) {
      failures.insert(failures.end(), e.failures().begin(), e.failures().end());
    }
  }
  if (!failures.empty()) {
    throw RunFailureError(std::move(failures));
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace herd
