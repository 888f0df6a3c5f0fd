#include <doctest.h>

#include <filesystem>

#include "dtnsat/event_log.hpp"

using namespace dtnsat;

TEST_CASE("record format") {
  std::string out;
  format_record({0.0, EventKind::create, 0, 3, std::nullopt}, out);
  CHECK(out == "0.0000 CREATE M1 n3 -\n");
  out.clear();
  format_record({quantize_time(12 * 0.1), EventKind::received, 0, 3, 7}, out);
  CHECK(out == "1.2000 RECEIVED M1 n3 n7\n");
}

TEST_CASE("parse") {
  CHECK(parse_event_log_text("").empty());
  const std::vector<EventRecord> records{
      {0.0, EventKind::create, 0, 3, std::nullopt},
      {0.1, EventKind::send_start, 0, 3, 7},
      {0.1, EventKind::received, 0, 3, 7},
      {quantize_time(3600.0000000001), EventKind::drop_ttl, 0, 7, std::nullopt},
      {4000.5, EventKind::reject_too_large, 11, 2, 2},
  };
  std::string text;
  for (const auto& r : records) format_record(r, text);
  CHECK(parse_event_log_text(text) == records);

  const auto path = std::filesystem::temp_directory_path() / "dtnsat_log_roundtrip.log";
  write_event_log(records, path);
  CHECK(parse_event_log(path) == records);
  std::filesystem::remove(path);
}

TEST_CASE("parse errors carry the line number") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      (void)parse_event_log_text(text);
    } catch (const EventLogError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string good = "0.0000 CREATE M1 n0 -\n";
  CHECK(line_of(good + "0.1000 RECEIVED M1 n0\n") == 2);
  CHECK(line_of(good + "0.1000 RECEIVED M1 n0 n1 x\n") == 2);
  CHECK(line_of(good + "0.1000 SENT M1 n0 n1\n") == 2);
  CHECK(line_of(good + "0.1000 RECEIVED M0 n0 n1\n") == 2);
  CHECK(line_of(good + "0.1000 CREATE M2 n0 n1\n") == 2);
  CHECK(line_of(good + "0.1000 RECEIVED M1 n0 -\n") == 2);
  CHECK(line_of("1.0000 CREATE M1 n0 -\n0.5000 CREATE M2 n0 -\n") == 2);
  CHECK(line_of(good + "0.1000 CREATE M2 n0 -") == 2);
}

TEST_CASE("fnv1a reference values") {
  Fnv1a empty;
  CHECK(empty.hex() == "cbf29ce484222325");
  Fnv1a a;
  a.update("a");
  CHECK(a.hex() == "af63dc4c8601ec8c");
}
