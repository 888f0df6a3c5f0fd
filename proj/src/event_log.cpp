#include "dtnsat/event_log.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dtnsat/wkt.hpp"

namespace dtnsat {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::create: return "CREATE";
    case EventKind::send_start: return "SEND_START";
    case EventKind::received: return "RECEIVED";
    case EventKind::aborted: return "ABORTED";
    case EventKind::drop_buffer: return "DROP_BUFFER";
    case EventKind::drop_ttl: return "DROP_TTL";
    case EventKind::drop_custody: return "DROP_CUSTODY";
    case EventKind::reject_too_large: return "REJECT_TOO_LARGE";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view token) {
  for (auto k : {EventKind::create, EventKind::send_start, EventKind::received, EventKind::aborted,
                 EventKind::drop_buffer, EventKind::drop_ttl, EventKind::drop_custody,
                 EventKind::reject_too_large}) {
    if (token == to_string(k)) return k;
  }
  return std::nullopt;
}

double quantize_time(double t) { return std::round(t * 1e4) / 1e4; }

void format_record(const EventRecord& r, std::string& out) {
  char buf[96];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.time, std::chars_format::fixed, 4);
  out.append(buf, ptr);
  out += ' ';
  out += to_string(r.kind);
  out += " M";
  ptr = std::to_chars(buf, buf + sizeof buf, std::uint64_t{r.message} + 1).ptr;
  out.append(buf, ptr);
  out += " n";
  ptr = std::to_chars(buf, buf + sizeof buf, r.from).ptr;
  out.append(buf, ptr);
  if (r.to) {
    out += " n";
    ptr = std::to_chars(buf, buf + sizeof buf, *r.to).ptr;
    out.append(buf, ptr);
  } else {
    out += " -";
  }
  out += '\n';
}

void write_event_log(std::span<const EventRecord> records, const std::filesystem::path& path) {
  std::string text;
  for (const auto& r : records) format_record(r, text);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write event log '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing event log '" + path.string() + "'");
}

EventLogError::EventLogError(std::size_t line, const std::string& what)
    : std::runtime_error("event log line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::uint32_t parse_id(std::string_view token, char prefix, std::size_t line, const char* what) {
  std::uint32_t v = 0;
  if (token.size() < 2 || token.front() != prefix || !parse_uint(token.substr(1), v)) {
    throw EventLogError(line, std::string("bad ") + what + " '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

std::vector<EventRecord> parse_event_log_text(std::string_view text) {
  std::vector<EventRecord> records;
  std::size_t line_no = 0;
  double last_time = -1.0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    if (eol == std::string_view::npos) throw EventLogError(line_no, "missing trailing newline");
    const std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol + 1);

    std::string_view fields[5];
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t sp = line.find(' ', pos);
      const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
      if (count == 5) {
        count = 6;
        break;
      }
      fields[count++] = line.substr(pos, end - pos);
      if (sp == std::string_view::npos) break;
      pos = sp + 1;
    }
    if (count != 5) {
      throw EventLogError(line_no, "expected 5 fields, got " + std::to_string(count));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw EventLogError(line_no, "empty field");
    }

    EventRecord r;
    const auto [tptr, tec] =
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.time);
    if (tec != std::errc{} || tptr != fields[0].data() + fields[0].size() || !std::isfinite(r.time)) {
      throw EventLogError(line_no, "bad time '" + std::string(fields[0]) + "'");
    }
    if (r.time < last_time) throw EventLogError(line_no, "time goes backwards");
    last_time = r.time;

    const auto kind = parse_event_kind(fields[1]);
    if (!kind) throw EventLogError(line_no, "unknown event kind '" + std::string(fields[1]) + "'");
    r.kind = *kind;
    const std::uint32_t msg = parse_id(fields[2], 'M', line_no, "message id");
    if (msg == 0) throw EventLogError(line_no, "message ids start at M1");
    r.message = msg - 1;
    r.from = parse_id(fields[3], 'n', line_no, "node id");
    if (fields[4] != "-") r.to = parse_id(fields[4], 'n', line_no, "node id");

    const bool needs_peer = r.kind == EventKind::send_start || r.kind == EventKind::received ||
                            r.kind == EventKind::aborted || r.kind == EventKind::reject_too_large;
    if (needs_peer != r.to.has_value()) {
      throw EventLogError(line_no, std::string(to_string(r.kind)) +
                                       (needs_peer ? " needs a receiver" : " takes no receiver"));
    }
    records.push_back(r);
  }
  return records;
}

std::vector<EventRecord> parse_event_log(const std::filesystem::path& path) {
  return parse_event_log_text(read_text_file(path));
}

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
  return buf;
}

}  // namespace dtnsat
