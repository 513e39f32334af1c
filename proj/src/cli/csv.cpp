#include "qclbm/cli/csv.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qclbm/error.hpp"

namespace qclbm::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_value(const CsvValue& v) {
  return std::visit([](const auto& x) { return fmt::format("{}", x); }, v);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
  fmt::print(out, "# qclbm-csv {} v{}\n{}\n", table.schema, kCsvSchemaVersion,
             fmt::join(table.columns, ","));
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("row width {} does not match {} columns in {}", row.size(),
                              table.columns.size(), path.string()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_value(row[i]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, fmt::format("write failed for {}", path.string()));
}

std::size_t CsvDocument::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("CSV has no column '{}'", name));
}

double CsvDocument::number(std::size_t row, std::string_view name) const {
  const std::string& s = text(row, name);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("column '{}' row {}: '{}' is not a number", name, row, s));
}

const std::string& CsvDocument::text(std::size_t row, std::string_view name) const {
  return rows.at(row).at(column(name));
}

CsvDocument read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot read {}", path.string()));
  CsvDocument doc;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, fmt::format("{} is empty", path.string()));
  const std::string prefix = "# qclbm-csv ";
  if (line.rfind(prefix, 0) != 0) {
    throw Error(ErrorCode::Io, fmt::format("{} lacks a qclbm-csv schema line", path.string()));
  }
  std::istringstream header(line.substr(prefix.size()));
  std::string version;
  header >> doc.schema >> version;
  if (version != fmt::format("v{}", kCsvSchemaVersion)) {
    throw Error(ErrorCode::Io, fmt::format("{}: unsupported schema version '{}'", path.string(), version));
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, fmt::format("{} has no header row", path.string()));
  doc.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != doc.columns.size()) {
      throw Error(ErrorCode::Io, fmt::format("{}: ragged row '{}'", path.string(), line));
    }
    doc.rows.push_back(std::move(cells));
  }
  return doc;
}

}  // namespace qclbm::cli
