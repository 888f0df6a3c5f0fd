// Command-line front end: run, batch and analyze.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "dtnsat/analysis.hpp"
#include "dtnsat/batch.hpp"
#include "dtnsat/config.hpp"
#include "dtnsat/simulation.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const fs::path& config_path, std::optional<std::uint64_t> seed,
            std::optional<fs::path> out) {
  auto runs = dtnsat::load_config_file(config_path);
  if (runs.size() != 1) {
    std::cerr << "error: config expands to " << runs.size() << " runs; use 'batch'\n";
    return 2;
  }
  dtnsat::ScenarioConfig config = runs.front().config;
  if (seed) config.seed = *seed;
  const fs::path dir = out ? *out : config.output_dir;
  const auto summary = dtnsat::run_scenario(config, dir);
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << dir.string() << " (" << summary.totals.records << " records, "
            << summary.totals.messages << " messages, log " << summary.log_digest << ")\n";
  return 0;
}

int cmd_batch(const fs::path& config_path, std::size_t jobs, std::optional<fs::path> out) {
  const auto runs = dtnsat::load_config_file(config_path);
  const fs::path dir = out ? *out : runs.front().config.output_dir;
  const auto results = dtnsat::run_batch(runs, dir, jobs);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.ok) {
      ++failed;
      std::cerr << "run " << r.index << " failed: " << r.error << "\n";
    }
  }
  std::cout << results.size() - failed << "/" << results.size() << " runs completed; index at "
            << (dir / "index.csv").string() << "\n";
  return failed ? 1 : 0;
}

int cmd_analyze(const fs::path& logs, std::size_t nodes, const fs::path& out) {
  auto runs = dtnsat::discover_runs(logs);
  if (runs.empty()) {
    std::cerr << "error: no runs found under " << logs.string() << "\n";
    return 2;
  }
  if (nodes > 0) {
    for (auto& r : runs) r.nodes = nodes;
  }
  dtnsat::summarize(runs, out);
  std::cout << "analyzed " << runs.size() << " run(s) into " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-tolerant network saturation simulator"};
  app.require_subcommand(1);

  fs::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the configured seed");
  run->add_option("--out", out, "Output directory (default: output.dir)");

  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* batch = app.add_subcommand("batch", "Run every combination of a sweep file");
  batch->add_option("--config", config_path, "Sweep file")->required()->check(CLI::ExistingFile);
  batch->add_option("--jobs", jobs, "Runs executed concurrently")->check(CLI::PositiveNumber);
  batch->add_option("--out", out, "Output directory (default: output.dir)");

  fs::path logs;
  fs::path analysis_out = "analysis";
  std::size_t nodes = 0;
  auto* analyze = app.add_subcommand("analyze", "Build saturation and occupancy tables from run logs");
  analyze->add_option("--logs", logs, "Batch or run directory")->required()->check(CLI::ExistingDirectory);
  analyze->add_option("--nodes", nodes, "Total node count (default: from each run's manifest)");
  analyze->add_option("--out", analysis_out, "Directory for the CSV tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, seed, out);
    if (*batch) return cmd_batch(config_path, jobs, out);
    return cmd_analyze(logs, nodes, analysis_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
