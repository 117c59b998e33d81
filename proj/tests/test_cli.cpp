#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "herd/config.hpp"
#include "herd/output.hpp"

using namespace herd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::vector<std::string> lines;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("herd_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_agents = 200;
  cfg.runs_per_alpha = 50;
  cfg.alpha_grid = {0.5, 1.3};
  cfg.master_seed = 17;
  cfg.bin_count = 20;
  return cfg;
}

}  // namespace

TEST_CASE("parse_alpha_range") {
  const auto g = parse_alpha_range("1.0:1.6:0.05");
  REQUIRE(g.size() == 13);
  CHECK(g.front() == 1.0);
  CHECK(g[6] == 1.3);
  CHECK(g.back() == 1.6);
  CHECK(parse_alpha_range(kDefaultAlphaRange).size() == 31);
  CHECK(parse_alpha_range("2:2:0.1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_alpha_range("2:1:0.1"), UsageError);
  CHECK_THROWS_AS(parse_alpha_range("1:2:0"), UsageError);
  CHECK_THROWS_AS(parse_alpha_range("1:2"), UsageError);
  CHECK_THROWS_AS(parse_alpha_range("1:x:0.1"), UsageError);
  CHECK(parse_alpha_list("0.5,1.3,1.6") == std::vector<double>{0.5, 1.3, 1.6});
  CHECK_THROWS_AS(parse_alpha_list("0.5,,1"), UsageError);
}

TEST_CASE("parse_config defaults and flags") {
  const auto d = parse_config({"--seed", "5"});
  CHECK(d.config.n_agents == 2000);
  CHECK(d.config.runs_per_alpha == 4000);
  CHECK(d.config.epsilon == 0.0);
  CHECK(d.config.alpha_grid.size() == 31);
  CHECK(d.config.bin_count == 100);
  CHECK(d.config.master_seed == 5);
  CHECK_FALSE(d.seed_generated);

  const auto e = parse_config({"--epsilon", "0.05", "--alpha", "1.0:1.6:0.05", "--seed", "1"});
  CHECK(e.config.epsilon == 0.05);
  CHECK(e.config.alpha_grid.size() == 13);

  const auto p = parse_config({"--paper-scale", "--seed", "1", "--plot", "kurtosis", "skew"});
  CHECK(p.config.n_agents == 10000);
  CHECK(p.config.runs_per_alpha == 20000);
  CHECK(p.plots == std::vector<PlotStyle>{PlotStyle::kurtosis, PlotStyle::skew});

  const auto l = parse_config({"--alpha-list", "0.5,1.3", "--threads", "3", "--bins", "50",
                               "--agents", "10", "--runs", "7", "--retain-populations",
                               "--out-dir", "somewhere"});
  CHECK(l.config.alpha_grid == std::vector<double>{0.5, 1.3});
  CHECK(l.config.thread_hint == 3);
  CHECK(l.config.bin_count == 50);
  CHECK(l.config.n_agents == 10);
  CHECK(l.config.runs_per_alpha == 7);
  CHECK(l.config.retain_populations);
  CHECK(l.out_dir == "somewhere");
  CHECK(l.seed_generated);
}

TEST_CASE("parse_config usage errors") {
  CHECK_THROWS_AS(parse_config({"--alpha", "2:1:0.1"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--alpha-list", "1.0,0.5"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--agents", "many"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--epsilon", "0.0.1"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--runs", "0"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--plot", "pie"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--paper-scale", "--agents", "5"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--alpha", "1:2:0.5", "--alpha-list", "1"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--config", "/nonexistent/herd.json"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--help"}), HelpRequested);
}

TEST_CASE("output directory comes from flag, environment, then default") {
  ::unsetenv(kOutDirEnv);
  CHECK(parse_config({"--seed", "1"}).out_dir == kDefaultOutDir);
  ::setenv(kOutDirEnv, "/tmp/from_env", 1);
  CHECK(parse_config({"--seed", "1"}).out_dir == "/tmp/from_env");
  CHECK(parse_config({"--seed", "1", "--out-dir", "x"}).out_dir == "x");
  ::unsetenv(kOutDirEnv);
}

TEST_CASE("config file values sit between defaults and flags") {
  TempDir dir("config_file");
  const fs::path file = dir.path / "cfg.json";
  std::ofstream(file) << R"({"epsilon": 0.05, "agents": 123, "alpha": "1.0:1.2:0.1", "seed": 99})";
  const auto o = parse_config({"--config", file.string(), "--agents", "456"});
  CHECK(o.config.epsilon == 0.05);
  CHECK(o.config.n_agents == 456);
  CHECK(o.config.alpha_grid == std::vector<double>{1.0, 1.1, 1.2});
  CHECK(o.config.master_seed == 99);
  CHECK_FALSE(o.seed_generated);

  std::ofstream(file) << R"({"colour": "blue"})";
  CHECK_THROWS_AS(parse_config({"--config", file.string()}), UsageError);
  std::ofstream(file) << "{not json";
  CHECK_THROWS_AS(parse_config({"--config", file.string()}), UsageError);
}

TEST_CASE("manifest round-trips the configuration") {
  TempDir dir("manifest");
  auto cfg = small_config();
  cfg.epsilon = 0.05;
  cfg.thread_hint = 2;
  cfg.alpha_grid = parse_alpha_range("0.5:0.7:0.05");
  cfg.master_seed = 0xFEDCBA9876543210ULL;
  const auto bundle = write_outputs(sweep_alpha(cfg), dir.path);
  const auto parsed = parse_config({"--config", bundle.manifest.string()});
  CHECK(parsed.config == cfg);
  CHECK_FALSE(parsed.seed_generated);
}

TEST_CASE("write_outputs file layout") {
  TempDir dir("layout");
  auto cfg = small_config();
  cfg.alpha_grid = {0.75};
  cfg.runs_per_alpha = 1;
  const auto result = sweep_alpha(cfg);
  const auto bundle = write_outputs(result, dir.path / "nested");

  const auto outcomes = lines_of(bundle.outcomes);
  REQUIRE(outcomes.size() == 2);
  CHECK(outcomes[0] == "alpha,run_index,k_hat,t_hat,iterations,stability");
  CHECK(fields(outcomes[1]).size() == 6);

  const auto summary = lines_of(bundle.summary);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] == "alpha,mean,variance,mu3,skew_normalized,kurtosis_normalized,n_runs");

  const auto hist = lines_of(bundle.histogram);
  CHECK(hist.size() == 1 + cfg.bin_count);
  CHECK(hist[0] == "alpha,bin_lo,bin_hi,count,fraction");

  CHECK(slurp(bundle.outcomes).find('\r') == std::string::npos);
  CHECK_FALSE(bundle.populations.has_value());
}

TEST_CASE("CSV floats read back exactly") {
  TempDir dir("roundtrip");
  const auto result = sweep_alpha(small_config());
  const auto bundle = write_outputs(result, dir.path);
  const auto rows = lines_of(bundle.outcomes);
  std::size_t row = 1;
  for (const auto& entry : result.per_alpha) {
    for (const auto& o : entry.runs.outcomes) {
      const auto f = fields(rows.at(row++));
      CHECK(std::strtod(f[0].c_str(), nullptr) == entry.runs.alpha);
      CHECK(std::strtod(f[2].c_str(), nullptr) == o.k_hat);
      CHECK(std::strtod(f[3].c_str(), nullptr) == o.t_hat);
      CHECK(std::stoul(f[4]) == o.iterations);
      CHECK(parse_stability(f[5]) == o.stability);
    }
  }
  const auto srows = lines_of(bundle.summary);
  for (std::size_t i = 0; i < result.per_alpha.size(); ++i) {
    const auto f = fields(srows.at(i + 1));
    const auto& s = result.per_alpha[i].summary;
    CHECK(std::strtod(f[1].c_str(), nullptr) == s.mean);
    CHECK(std::strtod(f[2].c_str(), nullptr) == s.variance);
    CHECK(std::strtod(f[3].c_str(), nullptr) == s.mu3);
    CHECK(std::strtod(f[4].c_str(), nullptr) == s.skew_normalized);
    CHECK(std::strtod(f[5].c_str(), nullptr) == s.kurtosis_normalized);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("rerunning a manifest reproduces the CSV bytes") {
  TempDir dir("rerun");
  const auto first = write_outputs(sweep_alpha(small_config()), dir.path / "a");
  const auto again = parse_config({"--config", first.manifest.string()});
  const auto second = write_outputs(sweep_alpha(again.config), dir.path / "b");
  CHECK(slurp(first.outcomes) == slurp(second.outcomes));
  CHECK(slurp(first.summary) == slurp(second.summary));
  CHECK(slurp(first.histogram) == slurp(second.histogram));
}

TEST_CASE("retained populations are written") {
  TempDir dir("populations");
  auto cfg = small_config();
  cfg.retain_populations = true;
  cfg.runs_per_alpha = 3;
  cfg.n_agents = 5;
  const auto bundle = write_outputs(sweep_alpha(cfg), dir.path);
  REQUIRE(bundle.populations.has_value());
  const auto rows = lines_of(*bundle.populations);
  CHECK(rows.size() == 1 + 2 * 3 * 5);
  CHECK(rows[0] == "alpha,run_index,agent_index,taste");
}

TEST_CASE("emit_plot_script") {
  TempDir dir("plots");
  const auto bundle = write_outputs(sweep_alpha(small_config()), dir.path);
  for (auto style : {PlotStyle::slices, PlotStyle::surface, PlotStyle::kurtosis, PlotStyle::skew}) {
    const auto script = emit_plot_script(bundle, style);
    CHECK(script.filename() == "plot_" + std::string(to_string(style)) + ".py");
    const auto text = slurp(script);
    CHECK(text.find("import matplotlib") != std::string::npos);
    CHECK(text.find(std::string(to_string(style)) + ".png") != std::string::npos);
  }
  CHECK(slurp(dir.path / "plot_kurtosis.py").find("kurtosis_normalized") != std::string::npos);
  CHECK(slurp(dir.path / "plot_skew.py").find("skew_normalized") != std::string::npos);
  CHECK(slurp(dir.path / "plot_slices.py").find("TARGETS = [1.0, 1.3, 1.6]") != std::string::npos);

  const auto missing = OutputBundle::in(dir.path / "nothing_here");
  CHECK_THROWS_AS(emit_plot_script(missing, PlotStyle::surface), std::runtime_error);
  CHECK_THROWS_AS(emit_plot_script(missing, PlotStyle::kurtosis), std::runtime_error);
}

TEST_CASE("write_outputs reports unwritable paths") {
  TempDir dir("unwritable");
  const fs::path blocker = dir.path / "file";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(write_outputs(sweep_alpha(small_config()), blocker / "sub"), std::runtime_error);
}
