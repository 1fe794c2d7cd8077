#include "ledger.hpp"

#include <filesystem>
#include <fstream>
#include <string_view>
#include <vector>

#include "hawc/errors.hpp"
#include "hawc/point_io.hpp"

namespace hawc::cli {

namespace {

HistoryLedger parse_ledger(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("ledger '" + path + "': empty file, expected header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.front() != "index") {
    throw IoError("ledger '" + path + "': bad header '" + line + "' (expected index,dim0,...)");
  }
  const std::size_t dim = header.size() - 1;
  if (line != "index," + point_header(dim)) {
    throw IoError("ledger '" + path + "': bad header '" + line + "' (expected index," +
                  point_header(dim) + ")");
  }

  PointSet points(dim);
  std::vector<double> row(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = "ledger '" + path + "' line " + std::to_string(line_no);
    if (fields.size() != dim + 1) {
      throw IoError(where + ": ragged row (" + std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(dim + 1) + ")");
    }
    const std::size_t expected = HistoryLedger::emission_index(points.size());
    if (fields[0] != std::to_string(expected)) {
      throw IoError(where + ": emission index '" + std::string(fields[0]) + "', expected " +
                    std::to_string(expected));
    }
    for (std::size_t d = 0; d < dim; ++d) row[d] = parse_double(fields[d + 1], where);
    points.push_back(row);
  }
  return HistoryLedger(std::move(points));
}

}  // namespace

HistoryLedger read_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open history ledger '" + path + "'");
  return parse_ledger(in, path);
}

std::optional<HistoryLedger> read_ledger_if_exists(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  return read_ledger(path);
}

void write_ledger_atomic(const std::string& path, const HistoryLedger& ledger) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write ledger temp file '" + tmp + "'");
    const auto& pts = ledger.points();
    out << "index," << point_header(pts.dim()) << '\n';
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out << HistoryLedger::emission_index(i);
      for (double v : pts[i]) out << ',' << format_double(v);
      out << '\n';
    }
    out.flush();
    if (!out) throw IoError("failed writing ledger temp file '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace ledger '" + path + "'");
  }
}

}  // namespace hawc::cli
