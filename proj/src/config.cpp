#include "herd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

#include <CLI11.hpp>

namespace herd {

namespace {

using nlohmann::json;

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw UsageError("malformed number '" + std::string(text) + "' in " + std::string(what));
  }
  return value;
}

double round_significant(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

std::string_view to_string(PlotStyle style) noexcept {
  switch (style) {
    case PlotStyle::slices:
      return "slices";
    case PlotStyle::surface:
      return "surface";
    case PlotStyle::kurtosis:
      return "kurtosis";
    case PlotStyle::skew:
      return "skew";
  }
  return "slices";
}

PlotStyle parse_plot_style(std::string_view text) {
  for (PlotStyle s : {PlotStyle::slices, PlotStyle::surface, PlotStyle::kurtosis, PlotStyle::skew}) {
    if (text == to_string(s)) return s;
  }
  throw UsageError("unknown plot style '" + std::string(text) +
                   "' (expected slices, surface, kurtosis or skew)");
}

std::vector<double> parse_alpha_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw UsageError("alpha range must look like lo:hi:step, got '" + std::string(text) + "'");
  }
  const double lo = parse_number(parts[0], "alpha range");
  const double hi = parse_number(parts[1], "alpha range");
  const double step = parse_number(parts[2], "alpha range");
  if (!(step > 0.0)) throw UsageError("alpha range step must be positive");
  if (hi < lo) throw UsageError("alpha range is not increasing: " + std::string(text));

  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(round_significant(lo + static_cast<double>(i) * step, 12));
  }
  return grid;
}

std::vector<double> parse_alpha_list(std::string_view text) {
  std::vector<double> grid;
  for (auto part : split(text, ',')) {
    grid.push_back(parse_number(part, "alpha list"));
  }
  return grid;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"epsilon", c.epsilon},
              {"agents", c.n_agents},
              {"runs", c.runs_per_alpha},
              {"alpha_grid", c.alpha_grid},
              {"seed", c.master_seed},
              {"bins", c.bin_count},
              {"threads", c.thread_hint},
              {"retain_populations", c.retain_populations}};
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig base) {
  const json& c = j.contains("config") ? j.at("config") : j;
  if (!c.is_object()) {
    throw UsageError("config file must hold a JSON object");
  }
  try {
    for (const auto& [key, value] : c.items()) {
      if (key == "epsilon") {
        base.epsilon = value.get<double>();
      } else if (key == "agents") {
        base.n_agents = value.get<std::size_t>();
      } else if (key == "runs") {
        base.runs_per_alpha = value.get<std::size_t>();
      } else if (key == "alpha_grid") {
        base.alpha_grid = value.get<std::vector<double>>();
      } else if (key == "alpha") {
        base.alpha_grid = parse_alpha_range(value.get<std::string>());
      } else if (key == "seed") {
        base.master_seed = value.get<std::uint64_t>();
      } else if (key == "bins") {
        base.bin_count = value.get<std::size_t>();
      } else if (key == "threads") {
        base.thread_hint = value.get<std::size_t>();
      } else if (key == "retain_populations") {
        base.retain_populations = value.get<bool>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return base;
}

CliOptions parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Monte Carlo sweep of peer-emulation cutoff equilibria", "herdsim"};

  std::string config_path;
  std::size_t agents = 0;
  std::size_t runs = 0;
  double epsilon = 0.0;
  std::string alpha_range;
  std::string alpha_list;
  std::size_t bins = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out_dir;
  std::vector<std::string> plots;
  bool paper_scale = false;
  bool retain = false;

  auto* config_opt = app.add_option("--config", config_path,
                                    "JSON config file or a previous run's manifest.json");
  auto* agents_opt = app.add_option("--agents", agents, "agents per run (default 2000)");
  auto* runs_opt = app.add_option("--runs", runs, "runs per alpha (default 4000)");
  auto* eps_opt = app.add_option("--epsilon", epsilon, "mean of the Normal taste distribution");
  auto* range_opt = app.add_option("--alpha", alpha_range, "alpha grid lo:hi:step (default 0.5:2.0:0.05)");
  auto* list_opt = app.add_option("--alpha-list", alpha_list, "explicit alpha grid v1,v2,...");
  auto* bins_opt = app.add_option("--bins", bins, "histogram bins over [0,1] (default 100)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit master seed (random if omitted)");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads, 0 = all cores");
  auto* out_opt = app.add_option("--out-dir", out_dir,
                                 std::string("output directory (default $") + kOutDirEnv + " or " +
                                     kDefaultOutDir + ")");
  app.add_option("--plot", plots, "emit a plot script: slices, surface, kurtosis, skew")
      ->take_all();
  auto* paper_opt = app.add_flag("--paper-scale", paper_scale, "10,000 agents and 20,000 runs");
  auto* retain_opt = app.add_flag("--retain-populations", retain,
                                  "also write every taste draw (small runs only)");
  range_opt->excludes(list_opt);
  paper_opt->excludes(agents_opt)->excludes(runs_opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliOptions opts;
  ExperimentConfig& cfg = opts.config;
  cfg.alpha_grid = parse_alpha_range(kDefaultAlphaRange);
  bool have_seed = false;

  if (config_opt->count() > 0) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open config file " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw UsageError("config file " + config_path + ": " + e.what());
    }
    cfg = config_from_json(j, cfg);
    const json& c = j.contains("config") ? j.at("config") : j;
    have_seed = c.contains("seed");
  }

  if (paper_opt->count() > 0) {
    cfg.n_agents = kPaperAgents;
    cfg.runs_per_alpha = kPaperRuns;
  }
  if (agents_opt->count() > 0) cfg.n_agents = agents;
  if (runs_opt->count() > 0) cfg.runs_per_alpha = runs;
  if (eps_opt->count() > 0) cfg.epsilon = epsilon;
  if (range_opt->count() > 0) cfg.alpha_grid = parse_alpha_range(alpha_range);
  if (list_opt->count() > 0) cfg.alpha_grid = parse_alpha_list(alpha_list);
  if (bins_opt->count() > 0) cfg.bin_count = bins;
  if (threads_opt->count() > 0) cfg.thread_hint = threads;
  if (retain_opt->count() > 0) cfg.retain_populations = retain;
  if (seed_opt->count() > 0) {
    cfg.master_seed = seed;
    have_seed = true;
  }
  if (!have_seed) {
    cfg.master_seed = random_seed();
    opts.seed_generated = true;
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  if (out_opt->count() > 0) {
    opts.out_dir = out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    opts.out_dir = env;
  } else {
    opts.out_dir = kDefaultOutDir;
  }
  for (const auto& p : plots) opts.plots.push_back(parse_plot_style(p));
  return opts;
}

}  // namespace herd
