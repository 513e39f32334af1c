#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qclbm::cli::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

struct BarPlot {
  std::string title;
  std::string y_label;
  bool log_y = false;
  std::vector<std::string> series_names;
  std::vector<std::string> group_labels;
  std::vector<std::vector<double>> values;  // [group][series]
};

/// Scalar field on an nx * ny grid, stored as value[y * nx + x], with an
/// optional vector field drawn as arrows.
struct Heatmap {
  std::string title;
  int nx = 0;
  int ny = 0;
  std::vector<double> value;
  std::optional<std::vector<double>> u;
  std::optional<std::vector<double>> v;
};

std::string render(const LinePlot& p);
std::string render(const BarPlot& p);
std::string render(const Heatmap& h);

void write_svg(const std::filesystem::path& path, const std::string& svg);

bool has_plot(const std::string& schema);

/// Plots for one CSV written by this tool; returns the files written.
std::vector<std::filesystem::path> plot_csv(const std::filesystem::path& csv,
                                            const std::filesystem::path& out_dir);

}  // namespace qclbm::cli::plot
