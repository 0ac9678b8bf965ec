#include "gnlab/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "gnlab/error.hpp"

namespace gnlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::array<char, 17> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + 16, h, 16);
  std::string out(buf.data(), res.ptr);
  return std::string(16 - out.size(), '0') + out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), ErrorKind::kParameter, "csv row width does not match header");
  rows_.push_back(std::move(cells));
}

namespace {

void append_cell(std::string& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) {
    out += cell;
    return;
  }
  out += '"';
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    append_cell(out, cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) append_line(out, r);
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::kParameter, "cannot open " + path + " for writing");
  f << str();
}

}  // namespace gnlab
