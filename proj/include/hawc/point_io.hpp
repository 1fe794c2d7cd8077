#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hawc/errors.hpp"
#include "hawc/point_set.hpp"

namespace hawc {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view text, const std::string& context) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError(context + ": cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string point_header(std::size_t dim) {
  std::string h;
  for (std::size_t d = 0; d < dim; ++d) {
    if (d) h += ',';
    h += "dim" + std::to_string(d);
  }
  return h;
}

/// Point CSV: header `dim0,...,dim{N-1}` then one row per point.
inline void write_points_csv(std::ostream& out, const PointSet& points) {
  out << point_header(points.dim()) << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (d) out << ',';
      out << format_double(p[d]);
    }
    out << '\n';
  }
}

namespace detail {

inline bool is_header_line(std::string_view first_field) {
  try {
    parse_double(first_field, "");
    return false;
  } catch (const IoError&) {
    return true;
  }
}

}  // namespace detail

/// Reads point rows. The `dim0,...` header is optional; a leading `index`
/// column (ledger files) is dropped. Blank lines are ignored. Errors carry
/// `source` and the 1-based line number.
inline PointSet read_points_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t skip_columns = 0;
  bool first = true;
  PointSet points;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (detail::is_header_line(fields.front())) {
        skip_columns = (fields.front() == "index") ? 1 : 0;
        if (fields.size() <= skip_columns) {
          throw IoError(source + ": header on line " + std::to_string(line_no) +
                        " declares no coordinate columns");
        }
        continue;
      }
    }
    if (fields.size() <= skip_columns) {
      throw IoError(source + ": row on line " + std::to_string(line_no) + " has no coordinates");
    }
    if (!points.empty() && fields.size() - skip_columns != points.dim()) {
      throw IoError(source + ": ragged row on line " + std::to_string(line_no) + " (" +
                    std::to_string(fields.size() - skip_columns) + " coordinates, expected " +
                    std::to_string(points.dim()) + ")");
    }
    row.clear();
    for (std::size_t f = skip_columns; f < fields.size(); ++f) {
      row.push_back(parse_double(fields[f], source + " line " + std::to_string(line_no)));
    }
    points.push_back(row);
  }
  return points;
}

inline PointSet read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open point file '" + path + "'");
  return read_points_csv(in, path);
}

}  // namespace hawc
