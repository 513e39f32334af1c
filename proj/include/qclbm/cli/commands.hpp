#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qclbm/cli/config.hpp"

namespace qclbm::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct CommandContext {
  RunConfig config;
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir;  // empty: <out_dir>/cache
  int threads = 1;
};

struct CommandResult {
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> spectrum_keys;
};

// Each command writes its CSVs plus manifest_<command>.json into out_dir.
CommandResult cmd_carleman_rmse(const CommandContext& ctx);
CommandResult cmd_spectra(const CommandContext& ctx);
CommandResult cmd_hhl(const CommandContext& ctx);
CommandResult cmd_resources(const CommandContext& ctx);

/// SVGs for each input CSV, chosen by its schema. Fails without writing
/// anything for a CSV that has no data rows.
CommandResult cmd_plot(const std::vector<std::filesystem::path>& csv_paths,
                       const std::filesystem::path& out_dir);

nlohmann::json manifest(const CommandContext& ctx, const std::string& command, const CommandResult& result);

/// {"error": {"code": ..., "message": ...}}
nlohmann::json error_record(const std::exception& e);

}  // namespace qclbm::cli
