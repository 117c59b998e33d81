// include/herd/output.hpp
//
// CSV/JSON output of a sweep and matplotlib scripts that render it.
//
// Files written to the output directory:
//   outcomes.csv     alpha,run_index,k_hat,t_hat,iterations,stability
//   summary.csv      alpha,mean,variance,mu3,skew_normalized,kurtosis_normalized,n_runs
//   histogram.csv    alpha,bin_lo,bin_hi,count,fraction
//   manifest.json    config, seed, program version, timestamps
//   populations.csv  alpha,run_index,agent_index,taste (only when retained)
// Floats use 17 significant digits, so reading them back is exact. All files
// are UTF-8 with LF line endings and a header row.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "herd/config.hpp"
#include "herd/experiment.hpp"

namespace herd {

inline constexpr const char* kVersion = "1.0.0";

struct OutputBundle {
  std::filesystem::path dir;
  std::filesystem::path outcomes;
  std::filesystem::path summary;
  std::filesystem::path histogram;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> populations;

  /// The standard file names inside `dir`; nothing is touched on disk.
  static OutputBundle in(const std::filesystem::path& dir);
};

/// printf("%.17g").
std::string format_double(double x);

/// Creates out_dir if needed and writes every file. Throws std::runtime_error
/// naming the offending path on I/O failure.
OutputBundle write_outputs(const SweepResult& result, const std::filesystem::path& out_dir);

/// Writes <dir>/plot_<style>.py, a standalone matplotlib script that reads
/// the bundle's CSVs and saves <style>.png next to them. Throws
/// std::runtime_error if a CSV the style needs is missing.
std::filesystem::path emit_plot_script(const OutputBundle& bundle, PlotStyle style);

}  // namespace herd
