#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dtnsat/config.hpp"

namespace dtnsat {

struct BatchRunResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::filesystem::path directory;
  std::size_t nodes = 0;
  std::vector<std::pair<std::string, std::string>> swept;
};

// Runs every expanded config with seed = base seed + run index, `jobs` at a
// time, each into out_dir/run_<index>. A failing run is recorded and the rest
// continue. Writes out_dir/index.csv and returns the rows in run order.
std::vector<BatchRunResult> run_batch(const std::vector<ExpandedRun>& runs,
                                      const std::filesystem::path& out_dir, std::size_t jobs);

std::string run_directory_name(std::size_t index);

// CSV helpers shared with the analysis tables.
std::string csv_field(std::string_view text);
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace dtnsat
