#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snss {

/// Flat `key = value` configuration. Lines starting with '#' and blank
/// lines are ignored; later assignments override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  /// Applies a `key=value` override; throws ConfigError when malformed.
  void apply_override(std::string_view assignment);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Sorted `key = value` lines, parseable by parse().
  std::string dump() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Splits on `sep` and trims whitespace; empty input gives an empty list.
std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string trim(std::string_view text);

int parse_int(std::string_view text, std::string_view key);
std::uint64_t parse_u64(std::string_view text, std::string_view key);
double parse_double(std::string_view text, std::string_view key);

}  // namespace snss
