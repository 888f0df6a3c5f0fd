#include "dtnsat/wkt.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace dtnsat {

WktParseError::WktParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// Cursor over a single geometry line.
class Scanner {
 public:
  Scanner(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected geometry keyword");
    return upper(text_.substr(start, pos_ - start));
  }

  std::optional<std::string> try_word() {
    skip_space();
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      return word();
    }
    return std::nullopt;
  }

  double number() {
    skip_space();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail("expected number");
    if (!std::isfinite(value)) fail("non-finite coordinate");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  bool next_is_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  // Consumes a balanced parenthesised body without interpreting it.
  void skip_balanced() {
    expect('(');
    int depth = 1;
    while (depth > 0) {
      if (pos_ >= text_.size()) fail("unbalanced parentheses");
      const char c = text_[pos_++];
      if (c == '(') ++depth;
      if (c == ')') --depth;
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw WktParseError(line_, what + " at column " + std::to_string(pos_ + 1));
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// "x y [z [m]]" tuples; extra ordinates are ignored.
std::vector<GeoPoint> coordinate_sequence(Scanner& s) {
  std::vector<GeoPoint> points;
  s.expect('(');
  do {
    GeoPoint p{s.number(), s.number()};
    while (s.next_is_number()) s.number();
    points.push_back(p);
  } while (s.accept(','));
  s.expect(')');
  return points;
}

void read_dimension_tag(Scanner& s) {
  if (auto tag = s.try_word()) {
    if (*tag == "EMPTY") return;
    if (*tag != "Z" && *tag != "M" && *tag != "ZM") s.fail("unexpected token '" + *tag + "'");
  }
}

void add_polyline(std::vector<GeoPoint> points, WktParseResult& out) {
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) {
    ++out.rejected_polylines;
    return;
  }
  out.polylines.push_back(Polyline{std::move(points)});
}

bool consume_empty(Scanner& s) {
  if (s.peek() == '(') return false;
  auto w = s.try_word();
  if (w && *w == "EMPTY") return true;
  s.fail("expected '(' or EMPTY");
}

void parse_geometry_line(std::string_view line, std::size_t line_no, WktParseResult& out) {
  Scanner s(line, line_no);
  const std::string kind = s.word();
  if (kind == "LINESTRING") {
    read_dimension_tag(s);
    if (!consume_empty(s)) add_polyline(coordinate_sequence(s), out);
  } else if (kind == "MULTILINESTRING") {
    read_dimension_tag(s);
    if (!consume_empty(s)) {
      s.expect('(');
      do {
        if (s.peek() == '(') {
          add_polyline(coordinate_sequence(s), out);
        } else {
          auto w = s.try_word();
          if (!w || *w != "EMPTY") s.fail("expected '(' or EMPTY");
        }
      } while (s.accept(','));
      s.expect(')');
    }
  } else if (kind == "POINT" || kind == "MULTIPOINT" || kind == "POLYGON" ||
             kind == "MULTIPOLYGON" || kind == "GEOMETRYCOLLECTION" || kind == "TRIANGLE" ||
             kind == "TIN" || kind == "POLYHEDRALSURFACE") {
    read_dimension_tag(s);
    if (s.peek() == '(') s.skip_balanced();
    ++out.skipped_geometries;
  } else {
    s.fail("unknown geometry '" + kind + "'");
  }
  if (s.accept(';')) {
    // Some exporters terminate statements with ';'.
  }
  if (!s.at_end()) s.fail("trailing characters");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

WktParseResult parse_wkt(std::string_view text) {
  WktParseResult out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    parse_geometry_line(line, line_no, out);
  }
  return out;
}

std::string serialize_wkt(std::span<const Polyline> polylines) {
  std::string out;
  for (const auto& pl : polylines) {
    out += "LINESTRING (";
    for (std::size_t i = 0; i < pl.points.size(); ++i) {
      if (i) out += ", ";
      out += format_double(pl.points[i].x);
      out += ' ';
      out += format_double(pl.points[i].y);
    }
    out += ")\n";
  }
  return out;
}

Region parse_region(std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    if (line.empty() || line.front() == '#') continue;

    Scanner s(line, line_no);
    const std::string kind = s.word();
    if (kind == "BBOX") {
      BoundingBox box{s.number(), s.number(), s.number(), s.number()};
      if (!s.at_end()) s.fail("trailing characters");
      return Region(box);
    }
    if (kind == "POLYGON") {
      read_dimension_tag(s);
      s.expect('(');
      auto ring = coordinate_sequence(s);
      if (s.peek() == ',') s.fail("polygons with holes are not supported as regions");
      s.expect(')');
      if (!s.at_end()) s.fail("trailing characters");
      return Region(Polygon{std::move(ring)});
    }
    s.fail("region must be POLYGON or BBOX, got '" + kind + "'");
  }
  throw MapError("region definition is empty");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dtnsat
