#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "snss/types.hpp"

namespace snss {

/// Numeric CSV table with a mandatory header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix data;

  /// Column index of `name`; throws DataError when absent.
  Index column(const std::string& name) const;
};

/// Reads a comma-separated, '.'-decimal numeric table. Throws DataError
/// naming the offending line and column on malformed input.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& source = "<memory>");

/// Real number with 17 significant digits.
std::string format_real(double value);

/// Loads a spatial data file with header `x,y,<name1>,...`; returns the
/// value column names through `names`.
SpatialData read_spatial_csv(const std::filesystem::path& path, std::vector<std::string>* names = nullptr);

/// Writes `text` to `path`, throwing DataError on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace snss
