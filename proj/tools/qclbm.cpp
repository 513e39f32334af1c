#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qclbm/cli/commands.hpp"
#include "qclbm/cli/config.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Quantum-classical lattice Boltzmann toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", qclbm::cli::kToolVersion);

  std::string config_path;
  std::string out_dir = "out";
  std::string cache_dir;
  int threads = 1;
  app.add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "parallel tasks")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--cache", cache_dir, "spectrum cache directory (default <out>/cache)");

  auto* rmse = app.add_subcommand("carleman-rmse", "Carleman vs LBM RMSE over time, plus final velocity fields");
  auto* spectra = app.add_subcommand("spectra", "spectra, histograms and zeta tables");
  auto* hhl = app.add_subcommand("hhl", "HHL emulation sweep");
  auto* resources = app.add_subcommand("resources", "CNOT upper bounds");
  auto* plot = app.add_subcommand("plot", "SVG plots from CSV outputs");
  std::vector<std::string> csvs;
  plot->add_option("csv", csvs, "CSV files written by this tool")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    qclbm::cli::CommandResult result;
    if (plot->parsed()) {
      std::vector<fs::path> paths(csvs.begin(), csvs.end());
      result = qclbm::cli::cmd_plot(paths, out_dir);
    } else {
      qclbm::cli::CommandContext ctx;
      ctx.config = config_path.empty() ? qclbm::cli::parse_config(nlohmann::json::object())
                                       : qclbm::cli::load_config(config_path);
      ctx.out_dir = out_dir;
      ctx.cache_dir = cache_dir;
      ctx.threads = threads;
      if (rmse->parsed()) result = qclbm::cli::cmd_carleman_rmse(ctx);
      else if (spectra->parsed()) result = qclbm::cli::cmd_spectra(ctx);
      else if (hhl->parsed()) result = qclbm::cli::cmd_hhl(ctx);
      else if (resources->parsed()) result = qclbm::cli::cmd_resources(ctx);
    }
    for (const auto& p : result.outputs) {
      std::cout << (plot->parsed() ? p : fs::path(out_dir) / p).string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << qclbm::cli::error_record(e).dump() << '\n';
    return 1;
  }
  return 0;
}
