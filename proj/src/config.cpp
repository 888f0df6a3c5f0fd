#include "dtnsat/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "dtnsat/event_log.hpp"
#include "dtnsat/wkt.hpp"

namespace dtnsat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  throw ConfigError("config key '" + std::string(key) + "': " + std::string(what) + " (got '" +
                    std::string(value) + "')");
}

double as_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "expected a number");
  }
  return out;
}

std::uint64_t as_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "expected a non-negative integer");
  return out;
}

bool as_bool(std::string_view key, std::string_view v) {
  const std::string l = lower(v);
  if (l == "true" || l == "1" || l == "yes") return true;
  if (l == "false" || l == "0" || l == "no") return false;
  bad_value(key, v, "expected true or false");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view v) {
  std::filesystem::path p{std::string(v)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value,
                                  const std::filesystem::path& base)>;

void group_keys(std::map<std::string, Setter, std::less<>>& table, const std::string& prefix,
                GroupConfig ScenarioConfig::*group) {
  table[prefix + ".count"] = [group](auto& c, auto k, auto v, auto&) { (c.*group).count = as_uint(k, v); };
  table[prefix + ".speed_min"] = [group](auto& c, auto k, auto v, auto&) {
    (c.*group).mobility.speed_min = as_double(k, v);
  };
  table[prefix + ".speed_max"] = [group](auto& c, auto k, auto v, auto&) {
    (c.*group).mobility.speed_max = as_double(k, v);
  };
  table[prefix + ".wait_min"] = [group](auto& c, auto k, auto v, auto&) {
    (c.*group).mobility.wait_min = as_double(k, v);
  };
  table[prefix + ".wait_max"] = [group](auto& c, auto k, auto v, auto&) {
    (c.*group).mobility.wait_max = as_double(k, v);
  };
  table[prefix + ".region"] = [group](auto& c, auto, auto v, auto& base) {
    const std::string head = lower(v.substr(0, std::min<std::size_t>(v.size(), 7)));
    if (v.empty() || lower(v) == "all") {
      (c.*group).region.clear();
    } else if (head.starts_with("bbox") || head.starts_with("polygon")) {
      (c.*group).region = std::string(v);
    } else {
      (c.*group).region = resolve(base, v).string();
    }
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const auto table = [] {
    std::map<std::string, Setter, std::less<>> t;
    t["seed"] = [](auto& c, auto k, auto v, auto&) { c.seed = as_uint(k, v); };
    t["end_time"] = [](auto& c, auto k, auto v, auto&) { c.end_time = as_double(k, v); };
    t["tick"] = [](auto& c, auto k, auto v, auto&) { c.tick = as_double(k, v); };
    t["report.interval"] = [](auto& c, auto k, auto v, auto&) { c.report_interval = as_double(k, v); };
    t["output.dir"] = [](auto& c, auto, auto v, auto& base) { c.output_dir = resolve(base, v); };

    t["map.source"] = [](auto& c, auto k, auto v, auto&) {
      if (v == "grid") {
        c.map.source = MapSource::grid;
      } else if (v == "wkt") {
        c.map.source = MapSource::wkt;
      } else {
        bad_value(k, v, "expected grid or wkt");
      }
    };
    t["map.grid.rows"] = [](auto& c, auto k, auto v, auto&) { c.map.grid_rows = as_uint(k, v); };
    t["map.grid.cols"] = [](auto& c, auto k, auto v, auto&) { c.map.grid_cols = as_uint(k, v); };
    t["map.grid.spacing"] = [](auto& c, auto k, auto v, auto&) { c.map.grid_spacing = as_double(k, v); };
    t["map.wkt"] = [](auto& c, auto, auto v, auto& base) {
      c.map.wkt_files.clear();
      std::string_view rest = v;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (!item.empty()) c.map.wkt_files.push_back(resolve(base, item));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
    };
    t["map.snap_tolerance"] = [](auto& c, auto k, auto v, auto&) { c.map.snap_tolerance = as_double(k, v); };

    group_keys(t, "group1", &ScenarioConfig::group1);
    group_keys(t, "group2", &ScenarioConfig::group2);

    t["link.range"] = [](auto& c, auto k, auto v, auto&) { c.link.range = as_double(k, v); };
    t["link.bandwidth"] = [](auto& c, auto k, auto v, auto&) {
      c.link.bandwidth = static_cast<double>(parse_byte_size(v));
      if (c.link.bandwidth <= 0.0) bad_value(k, v, "must be > 0");
    };
    t["link.exclusive_endpoints"] = [](auto& c, auto k, auto v, auto&) {
      c.link.exclusive_endpoints = as_bool(k, v);
    };

    t["router"] = [](auto& c, auto, auto v, auto&) {
      try {
        c.router.kind = parse_router_kind(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    };
    t["buffer.capacity"] = [](auto& c, auto k, auto v, auto&) {
      try {
        c.router.buffer_capacity = parse_byte_size(v);
      } catch (const ConfigError&) {
        bad_value(k, v, "expected a byte size such as 500KB");
      }
    };
    t["wave.immunity_time"] = [](auto& c, auto k, auto v, auto&) { c.router.immunity_time = as_double(k, v); };
    t["wave.custody_fraction"] = [](auto& c, auto k, auto v, auto&) {
      c.router.custody_fraction = as_double(k, v);
    };

    t["traffic.preset"] = [](auto& c, auto, auto v, auto&) {
      try {
        c.traffic = preset(v);
        c.traffic_preset = std::string(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    };
    t["traffic.interval_min"] = [](auto& c, auto k, auto v, auto&) {
      c.traffic.kind = TrafficKind::periodic;
      c.traffic.interval_min = as_double(k, v);
    };
    t["traffic.interval_max"] = [](auto& c, auto k, auto v, auto&) {
      c.traffic.kind = TrafficKind::periodic;
      c.traffic.interval_max = as_double(k, v);
    };
    t["traffic.window"] = [](auto& c, auto k, auto v, auto&) { c.traffic.creation_window = as_double(k, v); };
    t["traffic.size"] = [](auto& c, auto k, auto v, auto&) {
      try {
        c.traffic.message_size = parse_byte_size(v);
      } catch (const ConfigError&) {
        bad_value(k, v, "expected a byte size");
      }
    };
    t["traffic.ttl"] = [](auto& c, auto k, auto v, auto&) { c.traffic.ttl = as_double(k, v); };
    return t;
  }();
  return table;
}

// Keys whose effect others build on are applied first.
int apply_rank(std::string_view key) {
  if (key == "traffic.preset") return 0;
  if (key == "end_time") return 1;
  return 2;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys{"router", "buffer.capacity", "traffic.preset"};
  return keys;
}

struct RawEntry {
  std::string key;
  std::vector<std::string> values;  // > 1 for sweeps
  bool sweep = false;
};

std::vector<RawEntry> tokenize(std::string_view text) {
  std::vector<RawEntry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    RawEntry e;
    e.key = std::string(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (e.key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!setters().contains(e.key)) throw ConfigError("unknown config key '" + e.key + "'");
    for (const auto& other : entries) {
      if (other.key == e.key) throw ConfigError("config key '" + e.key + "' set twice");
    }
    if (value.starts_with('[')) {
      if (!value.ends_with(']')) throw ConfigError("config key '" + e.key + "': unterminated sweep list");
      e.sweep = true;
      std::string_view body = value.substr(1, value.size() - 2);
      while (true) {
        const auto semi = body.find(';');
        const auto item = trim(body.substr(0, semi));
        if (!item.empty()) e.values.emplace_back(item);
        if (semi == std::string_view::npos) break;
        body.remove_prefix(semi + 1);
      }
      if (e.values.empty()) throw ConfigError("config key '" + e.key + "': empty sweep list");
    } else {
      if (value.empty()) throw ConfigError("config key '" + e.key + "': missing value");
      e.values.emplace_back(value);
    }
    entries.push_back(std::move(e));
  }
  for (const auto& key : required_keys()) {
    const bool present = std::any_of(entries.begin(), entries.end(),
                                     [&](const RawEntry& e) { return e.key == key; });
    if (!present) throw ConfigError("missing required config key '" + key + "'");
  }
  return entries;
}

ScenarioConfig build(const std::vector<std::pair<std::string, std::string>>& assignments,
                     const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  auto ordered = assignments;
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& l, const auto& r) {
    return apply_rank(l.first) < apply_rank(r.first);
  });
  bool immunity_set = false;
  for (const auto& [key, value] : ordered) {
    apply_setting(c, key, value, base_dir);
    if (key == "wave.immunity_time") immunity_set = true;
  }
  if (!immunity_set) c.router.immunity_time = c.end_time;
  c.assignments = assignments;
  c.validate();
  return c;
}

}  // namespace

Bytes parse_byte_size(std::string_view text) {
  text = trim(text);
  std::size_t digits = 0;
  while (digits < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[digits])) || text[digits] == '.')) {
    ++digits;
  }
  const std::string_view number = text.substr(0, digits);
  const std::string unit = lower(trim(text.substr(digits)));
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (number.empty() || ec != std::errc{} || ptr != number.data() + number.size()) {
    throw ConfigError("bad byte size '" + std::string(text) + "'");
  }
  double scale = 1.0;
  if (unit.empty() || unit == "b") {
    scale = 1.0;
  } else if (unit == "kb") {
    scale = 1e3;
  } else if (unit == "mb") {
    scale = 1e6;
  } else {
    throw ConfigError("bad byte unit '" + unit + "' (use B, KB or MB)");
  }
  const double bytes = value * scale;
  if (bytes != std::floor(bytes)) throw ConfigError("byte size '" + std::string(text) + "' is fractional");
  return static_cast<Bytes>(bytes);
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(config, key, trim(value), base_dir);
}

void ScenarioConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  check(end_time > 0.0, "end_time must be > 0");
  check(tick > 0.0, "tick must be > 0");
  check(report_interval > 0.0, "report.interval must be > 0");
  check(total_nodes() >= 2, "scenario needs at least 2 nodes");
  try {
    group1.mobility.validate();
    group2.mobility.validate();
    link.validate();
    router.validate();
    traffic.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  check(traffic.kind == TrafficKind::one || traffic.creation_window <= end_time + kTimeEpsilon,
        "traffic.window must not exceed end_time");
  if (map.source == MapSource::wkt) {
    check(!map.wkt_files.empty(), "map.source = wkt needs map.wkt files");
    for (const auto& f : map.wkt_files) {
      check(std::filesystem::exists(f), "map file '" + f.string() + "' does not exist");
    }
  } else {
    check(map.grid_rows >= 2 && map.grid_cols >= 2, "map grid needs at least 2x2 vertices");
    check(map.grid_spacing > 0.0, "map.grid.spacing must be > 0");
  }
  check(map.snap_tolerance >= 0.0, "map.snap_tolerance must be >= 0");
  for (const auto* g : {&group1, &group2}) {
    const std::string head = lower(g->region.substr(0, std::min<std::size_t>(g->region.size(), 7)));
    if (!g->region.empty() && !head.starts_with("bbox") && !head.starts_with("polygon")) {
      check(std::filesystem::exists(g->region), "region file '" + g->region + "' does not exist");
    }
  }
}

std::string ScenarioConfig::config_hash() const {
  auto sorted = assignments;
  std::sort(sorted.begin(), sorted.end());
  Fnv1a h;
  for (const auto& [k, v] : sorted) {
    if (k == "seed" || k == "output.dir") continue;
    h.update(k);
    h.update(" = ");
    h.update(v);
    h.update("\n");
  }
  return h.hex();
}

std::vector<ExpandedRun> load_config(std::string_view text, const std::filesystem::path& base_dir) {
  const auto entries = tokenize(text);
  std::size_t total = 1;
  for (const auto& e : entries) total *= e.values.size();

  std::vector<ExpandedRun> runs;
  runs.reserve(total);
  for (std::size_t index = 0; index < total; ++index) {
    std::vector<std::pair<std::string, std::string>> assignments;
    std::vector<std::pair<std::string, std::string>> swept;
    // Mixed-radix decomposition with the last key as the fastest digit.
    std::size_t rest = index;
    std::vector<std::size_t> pick(entries.size());
    for (std::size_t i = entries.size(); i-- > 0;) {
      pick[i] = rest % entries[i].values.size();
      rest /= entries[i].values.size();
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      assignments.emplace_back(entries[i].key, entries[i].values[pick[i]]);
      if (entries[i].sweep) swept.emplace_back(entries[i].key, entries[i].values[pick[i]]);
    }
    runs.push_back({index, build(assignments, base_dir), std::move(swept)});
  }
  return runs;
}

std::vector<ExpandedRun> load_config_file(const std::filesystem::path& path) {
  return load_config(read_text_file(path), path.parent_path());
}

ScenarioConfig load_single_config(std::string_view text, const std::filesystem::path& base_dir) {
  auto runs = load_config(text, base_dir);
  if (runs.size() != 1) throw ConfigError("expected a single run, config expands to " +
                                          std::to_string(runs.size()));
  return std::move(runs.front().config);
}

}  // namespace dtnsat
