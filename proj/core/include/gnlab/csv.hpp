#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gnlab {

/// Shortest round-trip decimal form ('.' separator, no grouping); "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// JSON number, or the strings "inf"/"-inf"/"nan" (JSON has no such literals).
nlohmann::json json_number(double v);

/// FNV-1a 64-bit over the bytes of text, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// LF line endings, header first. Cells containing ',' or '"' are quoted.
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace gnlab
