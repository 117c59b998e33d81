// include/herd/config.hpp
//
// Command-line and config-file handling for herdsim.
//
// Precedence: command-line flags > config file (--config) > defaults.
// Defaults: 2,000 agents, 4,000 runs per alpha, epsilon 0, alpha grid
// 0.5:2.0:0.05, 100 bins. Without --seed (and no seed in the config file)
// a seed is drawn from std::random_device and flagged for printing.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "herd/experiment.hpp"

namespace herd {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "HERDSIM_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "herdsim_out";
inline constexpr const char* kDefaultAlphaRange = "0.5:2.0:0.05";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlotStyle { slices, surface, kurtosis, skew };

std::string_view to_string(PlotStyle style) noexcept;
PlotStyle parse_plot_style(std::string_view text);

struct CliOptions {
  ExperimentConfig config;
  std::filesystem::path out_dir;
  std::vector<PlotStyle> plots;
  bool seed_generated = false;
};

/// "lo:hi:step" -> lo, lo+step, ..., up to hi inclusive. Each point is
/// computed as lo + i*step and rounded to 12 significant digits so that
/// decimal grids print cleanly. Throws UsageError unless step > 0 and hi >= lo.
std::vector<double> parse_alpha_range(std::string_view text);

/// "v1,v2,..." -> values in the given order.
std::vector<double> parse_alpha_list(std::string_view text);

/// Parses argv-style arguments (program name excluded). Throws UsageError on
/// unknown flags, malformed numbers or an invalid grid.
CliOptions parse_config(const std::vector<std::string>& args);

nlohmann::json config_to_json(const ExperimentConfig& config);

/// Overlays the keys present in `j` onto `base`. Accepts either a bare
/// config object or a manifest carrying one under "config".
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

}  // namespace herd
