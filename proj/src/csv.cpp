#include "snss/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "snss/config.hpp"

namespace snss {

Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<Index>(i);
  }
  throw DataError("missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      table.header = split_list(line, ',');
      if (table.header.empty()) throw DataError(source + ": empty header row");
      continue;
    }
    if (trim(line).empty()) continue;
    const auto fields = split_list(line, ',');
    if (fields.size() != table.header.size()) {
      throw DataError(source + ": line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(table.header.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto& f = fields[c];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[c]);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw DataError(source + ": line " + std::to_string(lineno) + ", column '" + table.header[c] +
                        "': not a number '" + f + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw DataError(source + ": missing header row");
  table.data.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) table.data(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.string());
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

SpatialData read_spatial_csv(const std::filesystem::path& path, std::vector<std::string>* names) {
  const CsvTable table = read_csv(path);
  if (table.header.size() < 3 || table.header[0] != "x" || table.header[1] != "y") {
    throw DataError(path.string() + ": header must start with x,y followed by at least one value column");
  }
  if (table.data.rows() == 0) throw DataError(path.string() + ": no data rows");
  SpatialData data;
  data.coords = table.data.leftCols(2);
  data.values = table.data.rightCols(table.data.cols() - 2);
  if (names != nullptr) names->assign(table.header.begin() + 2, table.header.end());
  data.validate();
  return data;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace snss
