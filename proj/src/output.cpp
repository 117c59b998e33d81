#include "herd/output.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace herd {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing: " +
                             std::strerror(errno));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string outcomes_csv(const SweepResult& result) {
  std::string s = "alpha,run_index,k_hat,t_hat,iterations,stability\n";
  for (const auto& entry : result.per_alpha) {
    const std::string alpha = format_double(entry.runs.alpha);
    for (std::size_t r = 0; r < entry.runs.outcomes.size(); ++r) {
      const auto& o = entry.runs.outcomes[r];
      s += alpha;
      s += ',' + std::to_string(r);
      s += ',' + format_double(o.k_hat);
      s += ',' + format_double(o.t_hat);
      s += ',' + std::to_string(o.iterations);
      s += ',';
      s += to_string(o.stability);
      s += '\n';
    }
  }
  return s;
}

std::string summary_csv(const SweepResult& result) {
  std::string s = "alpha,mean,variance,mu3,skew_normalized,kurtosis_normalized,n_runs\n";
  for (const auto& entry : result.per_alpha) {
    const auto& m = entry.summary;
    s += format_double(entry.runs.alpha) + ',' + format_double(m.mean) + ',' +
         format_double(m.variance) + ',' + format_double(m.mu3) + ',' +
         format_double(m.skew_normalized) + ',' + format_double(m.kurtosis_normalized) + ',' +
         std::to_string(m.n_samples) + '\n';
  }
  return s;
}

std::string histogram_csv(const SweepResult& result) {
  std::string s = "alpha,bin_lo,bin_hi,count,fraction\n";
  for (const auto& entry : result.per_alpha) {
    const std::string alpha = format_double(entry.runs.alpha);
    const auto& h = entry.histogram;
    for (std::size_t i = 0; i < h.bin_count; ++i) {
      s += alpha + ',' + format_double(h.bin_lo(i)) + ',' + format_double(h.bin_hi(i)) + ',' +
           std::to_string(h.counts[i]) + ',' + format_double(h.fractions[i]) + '\n';
    }
  }
  return s;
}

void write_populations(const SweepResult& result, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing: " +
                             std::strerror(errno));
  }
  out << "alpha,run_index,agent_index,taste\n";
  for (const auto& entry : result.per_alpha) {
    const std::string alpha = format_double(entry.runs.alpha);
    for (std::size_t r = 0; r < entry.runs.populations.size(); ++r) {
      const auto tastes = entry.runs.populations[r].tastes();
      for (std::size_t a = 0; a < tastes.size(); ++a) {
        out << alpha << ',' << r << ',' << a << ',' << format_double(tastes[a]) << '\n';
      }
    }
  }
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

constexpr const char* kScriptPrelude = R"PY(#!/usr/bin/env python3
# Generated by herdsim. Reads the CSV files in this directory and saves a PNG.
import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read_rows(name):
    with open(os.path.join(HERE, name), newline="") as f:
        return list(csv.DictReader(f))


def histograms():
    by_alpha = defaultdict(list)
    for row in read_rows("histogram.csv"):
        center = 0.5 * (float(row["bin_lo"]) + float(row["bin_hi"]))
        by_alpha[float(row["alpha"])].append((center, 100.0 * float(row["fraction"])))
    return dict(sorted(by_alpha.items()))

)PY";

constexpr const char* kSlicesBody = R"PY(
TARGETS = [1.0, 1.3, 1.6]

hists = histograms()
alphas = list(hists)
chosen = []
for target in TARGETS:
    best = min(alphas, key=lambda a: abs(a - target))
    if best not in chosen:
        chosen.append(best)

fig, ax = plt.subplots(figsize=(7, 4.5))
for a in chosen:
    xs, ys = zip(*hists[a])
    ax.step(xs, ys, where="mid", label="alpha = %g" % a)
ax.set_xlabel("equilibrium fraction acting")
ax.set_ylabel("percent of runs")
ax.set_xlim(0, 1)
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "slices.png"), dpi=150)
)PY";

constexpr const char* kSurfaceBody = R"PY(
hists = histograms()
alphas = list(hists)
peak = max(max(y for _, y in h) for h in hists.values()) or 1.0
spacing = peak / 4.0

fig, ax = plt.subplots(figsize=(7, 9))
for i, a in enumerate(reversed(alphas)):
    xs, ys = zip(*hists[a])
    base = (len(alphas) - 1 - i) * spacing
    ax.fill_between(xs, base, [base + y for y in ys], step="mid", color="white", zorder=i)
    ax.step(xs, [base + y for y in ys], where="mid", color="black", linewidth=0.7, zorder=i)
ax.set_yticks([k * spacing for k in range(len(alphas))][:: max(1, len(alphas) // 10)])
ax.set_yticklabels(["%g" % a for a in alphas][:: max(1, len(alphas) // 10)])
ax.set_xlabel("equilibrium fraction acting")
ax.set_ylabel("alpha (each ridge: percent of runs per bin)")
ax.set_xlim(0, 1)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "surface.png"), dpi=150)
)PY";

constexpr const char* kMomentBody = R"PY(
rows = read_rows("summary.csv")
xs = [float(r["alpha"]) for r in rows]
ys = [float(r[COLUMN]) for r in rows]

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(xs, ys, marker="o", markersize=3)
for ref in REFERENCE_LINES:
    ax.axhline(ref, color="grey", linestyle="--", linewidth=0.8)
ax.set_xlabel("alpha")
ax.set_ylabel(LABEL)
fig.tight_layout()
fig.savefig(os.path.join(HERE, OUTPUT), dpi=150)
)PY";

}  // namespace

OutputBundle OutputBundle::in(const fs::path& dir) {
  OutputBundle b;
  b.dir = dir;
  b.outcomes = dir / "outcomes.csv";
  b.summary = dir / "summary.csv";
  b.histogram = dir / "histogram.csv";
  b.manifest = dir / "manifest.json";
  return b;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

OutputBundle write_outputs(const SweepResult& result, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                             ec.message());
  }
  OutputBundle bundle = OutputBundle::in(out_dir);
  write_file(bundle.outcomes, outcomes_csv(result));
  write_file(bundle.summary, summary_csv(result));
  write_file(bundle.histogram, histogram_csv(result));
  if (result.config.retain_populations) {
    bundle.populations = out_dir / "populations.csv";
    write_populations(result, *bundle.populations);
  }

  const auto finished = std::chrono::system_clock::now();
  const auto started =
      finished - std::chrono::duration_cast<std::chrono::system_clock::duration>(
                     std::chrono::duration<double>(result.wall_seconds));
  nlohmann::json files = {{"outcomes", bundle.outcomes.filename().string()},
                          {"summary", bundle.summary.filename().string()},
                          {"histogram", bundle.histogram.filename().string()}};
  if (bundle.populations) files["populations"] = bundle.populations->filename().string();
  const nlohmann::json manifest = {{"program", "herdsim"},
                                   {"version", kVersion},
                                   {"config", config_to_json(result.config)},
                                   {"started_at", utc_timestamp(started)},
                                   {"finished_at", utc_timestamp(finished)},
                                   {"wall_seconds", result.wall_seconds},
                                   {"files", files}};
  write_file(bundle.manifest, manifest.dump(2) + '\n');
  return bundle;
}

fs::path emit_plot_script(const OutputBundle& bundle, PlotStyle style) {
  const bool needs_histogram = style == PlotStyle::slices || style == PlotStyle::surface;
  const fs::path& needed = needs_histogram ? bundle.histogram : bundle.summary;
  if (!fs::exists(needed)) {
    throw std::runtime_error("cannot emit plot script: missing " + needed.string());
  }

  std::string script = kScriptPrelude;
  switch (style) {
    case PlotStyle::slices:
      script += kSlicesBody;
      break;
    case PlotStyle::surface:
      script += kSurfaceBody;
      break;
    case PlotStyle::kurtosis:
      script += "COLUMN = \"kurtosis_normalized\"\nLABEL = \"normalized kurtosis\"\n"
                "REFERENCE_LINES = [3.0, 1.0]\nOUTPUT = \"kurtosis.png\"\n";
      script += kMomentBody;
      break;
    case PlotStyle::skew:
      script += "COLUMN = \"skew_normalized\"\nLABEL = \"normalized skew\"\n"
                "REFERENCE_LINES = [0.0]\nOUTPUT = \"skew.png\"\n";
      script += kMomentBody;
      break;
  }
  const fs::path path = bundle.dir / ("plot_" + std::string(to_string(style)) + ".py");
  write_file(path, script);
  return path;
}

}  // namespace herd
