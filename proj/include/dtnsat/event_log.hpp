#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtnsat/types.hpp"

namespace dtnsat {

enum class EventKind {
  create,
  send_start,
  received,
  aborted,
  drop_buffer,
  drop_ttl,
  drop_custody,
  reject_too_large,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view token);

// One log line: "time kind msg from to". `to` is absent ("-") for CREATE and
// drop records. Time is kept rounded to 1e-4 s so that formatting and parsing
// round-trip exactly.
struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::create;
  MessageIndex message = 0;
  NodeId from = 0;
  std::optional<NodeId> to;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

double quantize_time(double t);

// Appends the line for r (with trailing '\n') to out.
void format_record(const EventRecord& r, std::string& out);

void write_event_log(std::span<const EventRecord> records, const std::filesystem::path& path);

class EventLogError : public std::runtime_error {
 public:
  EventLogError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Strict: exactly five fields, known kind, non-decreasing times.
std::vector<EventRecord> parse_event_log_text(std::string_view text);
std::vector<EventRecord> parse_event_log(const std::filesystem::path& path);

// FNV-1a 64 over a byte stream; used for run manifests and log digests.
class Fnv1a {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001B3ULL;
    }
  }
  std::uint64_t digest() const { return hash_; }
  std::string hex() const;

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

}  // namespace dtnsat
