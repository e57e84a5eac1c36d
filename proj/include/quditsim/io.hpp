#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace quditsim {

/// Writes to a temporary file in the same directory and renames it over
/// `path`. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Fixed-format number for CSV/JSON tables ("%.12g"; "inf"/"nan" spelled out).
std::string format_number(double x);

/// Builds CSV text with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row(const std::vector<double>& values);
  CsvTable& row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
};

/// 64-bit FNV-1a digest, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace quditsim
