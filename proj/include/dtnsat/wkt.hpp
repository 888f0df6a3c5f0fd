#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtnsat/geometry.hpp"

namespace dtnsat {

class WktParseError : public std::runtime_error {
 public:
  WktParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct WktParseResult {
  std::vector<Polyline> polylines;
  std::size_t skipped_geometries = 0;  // POINT, POLYGON, ... (not road data)
  std::size_t rejected_polylines = 0;  // fewer than two distinct points
};

// One geometry per line; blank lines and lines starting with '#' are ignored.
// Consecutive duplicate points are collapsed.
WktParseResult parse_wkt(std::string_view text);

// Writes one LINESTRING per polyline using shortest round-trip number
// formatting, so parse_wkt(serialize_wkt(p)) reproduces p exactly.
std::string serialize_wkt(std::span<const Polyline> polylines);

// Region file: a single WKT POLYGON, or a line "BBOX minx miny maxx maxy".
Region parse_region(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dtnsat
