#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qclbm::cli {

using CsvValue = std::variant<std::string, long long, double>;
using CsvRow = std::vector<CsvValue>;

/// First line of every CSV this tool writes:  # qclbm-csv <schema> v<version>
inline constexpr int kCsvSchemaVersion = 1;

struct CsvTable {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<CsvRow> rows;
};

std::string format_value(const CsvValue& v);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Cells come back as strings; numeric columns are parsed by the caller.
struct CsvDocument {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
  double number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};

CsvDocument read_csv(const std::filesystem::path& path);

}  // namespace qclbm::cli
