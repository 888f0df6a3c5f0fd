#include "dtnsat/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "dtnsat/batch.hpp"
#include "dtnsat/wkt.hpp"

namespace dtnsat {

SaturationTracker::SaturationTracker(std::size_t total_nodes) : total_nodes_(total_nodes) {
  if (total_nodes == 0) throw AnalysisError("saturation needs at least one node");
}

void SaturationTracker::add(const EventRecord& r) {
  if (r.kind == EventKind::create) {
    if (r.message >= messages_.size()) messages_.resize(r.message + 1);
    State& s = messages_[r.message];
    if (s.created) throw AnalysisError("message " + message_name(r.message) + " created twice");
    s.created = true;
    s.seen.assign(total_nodes_, false);
    s.series.message = r.message;
    s.series.creator = r.from;
    s.series.created_at = r.time;
    if (r.from < total_nodes_) s.seen[r.from] = true;
    s.series.unique_receivers = 1;
    s.series.points.push_back({r.time, std::min(100.0, 100.0 / static_cast<double>(total_nodes_))});
    return;
  }
  if (r.kind != EventKind::received) return;
  if (r.message >= messages_.size() || !messages_[r.message].created) {
    throw AnalysisError("RECEIVED for unknown message " + message_name(r.message));
  }
  State& s = messages_[r.message];
  const NodeId to = *r.to;
  if (to >= total_nodes_) {
    throw AnalysisError("node " + node_name(to) + " outside a " + std::to_string(total_nodes_) +
                        "-node network");
  }
  if (s.seen[to]) {
    ++s.series.redeliveries;
    return;
  }
  s.seen[to] = true;
  ++s.series.unique_receivers;
  const double pct = std::min(
      100.0, 100.0 * static_cast<double>(s.series.unique_receivers) / static_cast<double>(total_nodes_));
  s.series.points.push_back({r.time, pct});
}

std::vector<SaturationSeries> SaturationTracker::series() const {
  std::vector<SaturationSeries> out;
  for (const auto& s : messages_) {
    if (s.created) out.push_back(s.series);
  }
  return out;
}

std::vector<SaturationSeries> saturation(std::span<const EventRecord> records, std::size_t total_nodes) {
  SaturationTracker tracker(total_nodes);
  for (const auto& r : records) tracker.add(r);
  return tracker.series();
}

std::optional<double> time_to_full_saturation(const SaturationSeries& series) {
  for (const auto& p : series.points) {
    if (p.pct >= 100.0) return p.time - series.created_at;
  }
  return std::nullopt;
}

std::vector<double> ema(std::span<const double> values, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("ema: alpha must be in (0, 1]");
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back(out.empty() ? x : (1.0 - alpha) * out.back() + alpha * x);
  return out;
}

std::vector<OccupancySample> read_occupancy_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<OccupancySample> samples;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != "time,mean_occupancy_pct") throw AnalysisError(path.string() + ": unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    OccupancySample s;
    auto parse = [&](const std::string& f, double& v) {
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw AnalysisError(path.string() + " line " + std::to_string(line_no) + ": bad number");
      }
    };
    if (fields.size() != 2) {
      throw AnalysisError(path.string() + " line " + std::to_string(line_no) + ": expected 2 columns");
    }
    parse(fields[0], s.time);
    parse(fields[1], s.mean_occupancy_pct);
    samples.push_back(s);
  }
  return samples;
}

double max_avg_occupancy(std::span<const OccupancySample> samples) {
  if (samples.empty()) throw AnalysisError("empty occupancy report");
  double best = samples.front().mean_occupancy_pct;
  for (const auto& s : samples) best = std::max(best, s.mean_occupancy_pct);
  return best;
}

namespace {

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  if (!std::filesystem::exists(path)) return out;
  const std::string text = read_text_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) out.emplace(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path) {
    text_ = header + "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_field(cells[i]);
    }
    text_ += '\n';
  }
  void save() const {
    std::ofstream out(path_, std::ios::binary);
    out << text_;
    if (!out) throw AnalysisError("cannot write '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::string text_;
};

}  // namespace

std::vector<RunInput> discover_runs(const std::filesystem::path& logs_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(logs_dir)) throw AnalysisError("'" + logs_dir.string() + "' is not a directory");
  std::vector<RunInput> runs;

  const fs::path index = logs_dir / "index.csv";
  if (fs::exists(index)) {
    const std::string text = read_text_file(index);
    std::vector<std::string> header;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const auto fields = split_csv_line(std::string_view(text).substr(pos, eol - pos));
      pos = eol + 1;
      if (header.empty()) {
        header = fields;
        continue;
      }
      if (fields.size() != header.size()) continue;
      RunInput r;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& h = header[i];
        if (h == "run") {
          r.run = fields[i];
        } else if (h == "directory") {
          r.directory = logs_dir / fields[i];
        } else if (h == "nodes") {
          r.nodes = std::stoul(fields[i]);
        } else if (h != "seed" && h != "status" && h != "error") {
          r.params.emplace_back(h, fields[i]);
        }
      }
      runs.push_back(std::move(r));
    }
    return runs;
  }

  if (fs::exists(logs_dir / "event.log")) {
    runs.push_back({logs_dir.filename().string(), {}, logs_dir, 0});
    return runs;
  }
  for (const auto& entry : fs::directory_iterator(logs_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "event.log")) {
      runs.push_back({entry.path().filename().string(), {}, entry.path(), 0});
    }
  }
  std::sort(runs.begin(), runs.end(),
            [](const RunInput& l, const RunInput& r) { return l.directory < r.directory; });
  return runs;
}

void summarize(const std::vector<RunInput>& runs, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> param_keys;
  for (const auto& r : runs) {
    for (const auto& [k, v] : r.params) {
      if (std::find(param_keys.begin(), param_keys.end(), k) == param_keys.end()) param_keys.push_back(k);
    }
  }
  std::string key_header = "run";
  for (const auto& k : param_keys) key_header += "," + csv_field(k);

  CsvFile times(out_dir / "table_saturation_times.csv",
                key_header + ",status,message,created_at,time_to_saturation,max_saturation_pct," +
                    "unique_receivers,redeliveries");
  CsvFile occupancy(out_dir / "table_occupancy.csv", key_header + ",status,max_avg_occupancy_pct");
  CsvFile unsaturated(out_dir / "table_unsaturated.csv",
                      key_header + ",status,nodes,messages,unsaturated,redeliveries");
  CsvFile ema_file(out_dir / "ema_series.csv",
                   key_header + ",message,created_at,time_to_saturation,ema_time_to_saturation");
  // series_<msg>.csv collects the curve of that message from every run.
  std::map<MessageIndex, std::string> series_text;

  for (const auto& run : runs) {
    std::vector<std::string> key{run.run};
    for (const auto& k : param_keys) {
      const auto it = std::find_if(run.params.begin(), run.params.end(),
                                   [&](const auto& kv) { return kv.first == k; });
      key.push_back(it == run.params.end() ? std::string{} : it->second);
    }
    auto with = [&key](std::vector<std::string> tail) {
      std::vector<std::string> row = key;
      row.insert(row.end(), tail.begin(), tail.end());
      return row;
    };

    std::vector<SaturationSeries> all;
    std::size_t nodes = run.nodes;
    std::string status = "ok";
    try {
      if (nodes == 0) {
        const auto manifest = read_manifest(run.directory / "manifest.txt");
        const auto it = manifest.find("nodes");
        if (it == manifest.end()) throw AnalysisError("node count unknown");
        nodes = std::stoul(it->second);
      }
      all = saturation(parse_event_log(run.directory / "event.log"), nodes);
    } catch (const std::exception&) {
      status = "absent";
    }

    if (status == "absent") {
      times.row(with({status, "", "", "", "", "", ""}));
      unsaturated.row(with({status, std::to_string(nodes), "", "", ""}));
    } else {
      std::size_t below = 0;
      std::size_t redeliveries = 0;
      std::vector<double> saturated_times;
      std::vector<const SaturationSeries*> saturated;
      for (const auto& s : all) {
        const auto t = time_to_full_saturation(s);
        if (!t) ++below;
        redeliveries += s.redeliveries;
        times.row(with({status, message_name(s.message), fixed(s.created_at, 4), t ? fixed(*t, 4) : "",
                        fixed(s.final_pct(), 4), std::to_string(s.unique_receivers),
                        std::to_string(s.redeliveries)}));
        if (t) {
          saturated_times.push_back(*t);
          saturated.push_back(&s);
        }
        std::string& text = series_text[s.message];
        if (text.empty()) text = key_header + ",time,elapsed,saturation_pct\n";
        for (const auto& p : s.points) {
          std::string line;
          for (std::size_t i = 0; i < key.size(); ++i) line += (i ? "," : "") + csv_field(key[i]);
          text += line + "," + fixed(p.time, 4) + "," + fixed(p.time - s.created_at, 4) + "," +
                  fixed(p.pct, 4) + "\n";
        }
      }
      const auto smoothed = ema(saturated_times);
      for (std::size_t i = 0; i < saturated.size(); ++i) {
        ema_file.row(with({message_name(saturated[i]->message), fixed(saturated[i]->created_at, 4),
                           fixed(saturated_times[i], 4), fixed(smoothed[i], 4)}));
      }
      unsaturated.row(with({status, std::to_string(nodes), std::to_string(all.size()),
                            std::to_string(below), std::to_string(redeliveries)}));
    }

    try {
      const auto samples = read_occupancy_csv(run.directory / "occupancy.csv");
      occupancy.row(with({"ok", fixed(max_avg_occupancy(samples), 6)}));
    } catch (const std::exception&) {
      occupancy.row(with({"absent", ""}));
    }
  }

  for (const CsvFile* f : {&times, &occupancy, &unsaturated, &ema_file}) f->save();
  for (const auto& [m, text] : series_text) {
    std::ofstream out(out_dir / ("series_" + message_name(m) + ".csv"), std::ios::binary);
    out << text;
    if (!out) throw AnalysisError("cannot write series for " + message_name(m));
  }
}

}  // namespace dtnsat
