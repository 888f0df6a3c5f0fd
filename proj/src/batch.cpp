#include "dtnsat/batch.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dtnsat/simulation.hpp"

namespace dtnsat {

std::string run_directory_name(std::size_t index) { return "run_" + std::to_string(index); }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

namespace {

void write_index(const std::vector<BatchRunResult>& results, const std::filesystem::path& path) {
  std::vector<std::string> keys;
  for (const auto& r : results) {
    for (const auto& [k, v] : r.swept) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::string text = "run,seed,status,nodes";
  for (const auto& k : keys) text += "," + csv_field(k);
  text += ",directory,error\n";
  for (const auto& r : results) {
    text += std::to_string(r.index) + "," + std::to_string(r.seed) + "," + (r.ok ? "ok" : "failed") +
            "," + std::to_string(r.nodes);
    for (const auto& k : keys) {
      const auto it = std::find_if(r.swept.begin(), r.swept.end(),
                                   [&](const auto& kv) { return kv.first == k; });
      text += "," + (it == r.swept.end() ? std::string{} : csv_field(it->second));
    }
    text += "," + csv_field(r.directory.filename().string()) + "," + csv_field(r.error) + "\n";
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

std::vector<BatchRunResult> run_batch(const std::vector<ExpandedRun>& runs,
                                      const std::filesystem::path& out_dir, std::size_t jobs) {
  std::filesystem::create_directories(out_dir);
  std::vector<BatchRunResult> results(runs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      const ExpandedRun& run = runs[i];
      BatchRunResult& r = results[i];
      r.index = run.index;
      r.seed = run.config.seed + run.index;
      r.swept = run.swept;
      r.nodes = run.config.total_nodes();
      r.directory = out_dir / run_directory_name(run.index);
      try {
        ScenarioConfig config = run.config;
        config.seed = r.seed;
        run_scenario(config, r.directory);
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };

  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, runs.size()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  write_index(results, out_dir / "index.csv");
  return results;
}

}  // namespace dtnsat
