#include "qclbm/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "qclbm/cli/csv.hpp"
#include "qclbm/error.hpp"

namespace qclbm::cli::plot {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v, double px_lo, double px_hi) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return px_lo + t * (px_hi - px_lo);
  }
};

Axis make_axis(double lo, double hi, bool log) {
  if (!(lo <= hi)) return {0.0, 1.0, log};
  if (log) {
    const double a = std::floor(std::log10(lo));
    const double b = std::ceil(std::log10(hi));
    return {std::pow(10.0, a), std::pow(10.0, b == a ? a + 1 : b), true};
  }
  if (lo == hi) return {lo - 0.5, hi + 0.5, false};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, false};
}

std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));
}

std::string frame(const Axis& x, const Axis& y, const std::string& xl, const std::string& yl, bool x_ticks) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string s = fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", x0, y1, x1 - x0,
      y0 - y1);
  auto tick = [](double v) { return fmt::format("{:.3g}", v); };
  if (y.log) {
    for (double e = std::log10(y.lo); e <= std::log10(y.hi) + 1e-9; e += 1.0) {
      const double py = y.map(std::pow(10.0, e), y0, y1);
      s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", x0, py, x1, py);
      s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"end\">1e{}</text>\n",
                       x0 - 6, py + 4, static_cast<int>(e));
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double v = y.lo + (y.hi - y.lo) * i / 5.0;
      const double py = y.map(v, y0, y1);
      s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", x0, py, x1, py);
      s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"end\">{}</text>\n",
                       x0 - 6, py + 4, tick(v));
    }
  }
  if (x_ticks) {
    for (int i = 0; i <= 5; ++i) {
      const double v = x.lo + (x.hi - x.lo) * i / 5.0;
      const double px = x.map(v, x0, x1);
      s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       px, y0 + 16, tick(v));
    }
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" "
                   "text-anchor=\"middle\">{}</text>\n",
                   (x0 + x1) / 2, kHeight - 16, escape(xl));
  s += fmt::format("<text x=\"18\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"13\" "
                   "text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                   (y0 + y1) / 2, escape(yl));
  return s;
}

std::string legend(const std::vector<std::string>& labels) {
  std::string s;
  const double x = kWidth - kRight + 12;
  for (std::size_t i = 0; i < labels.size() && i < 24; ++i) {
    const double y = kTop + 8 + 16.0 * static_cast<double>(i);
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", x, y, color(i));
    s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n", x + 14,
                     y + 9, escape(labels[i]));
  }
  return s;
}

// ---- CSV to plot mappings

using Doc = CsvDocument;

std::string label_of(const Doc& d, std::size_t row, const std::vector<std::string>& cols) {
  std::string s;
  for (const auto& c : cols) {
    if (!s.empty()) s += ' ';
    s += c + "=" + d.text(row, c);
  }
  return s;
}

std::vector<Series> group_series(const Doc& d, const std::vector<std::string>& key_cols, const std::string& xc,
                                 const std::string& yc) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const std::string key = label_of(d, r, key_cols);
    auto [it, fresh] = index.emplace(key, out.size());
    if (fresh) out.push_back({key, {}, {}});
    Series& s = out[it->second];
    s.x.push_back(d.number(r, xc));
    s.y.push_back(d.number(r, yc));
  }
  return out;
}

bool all_positive(const std::vector<Series>& series) {
  for (const auto& s : series) {
    for (const double v : s.y) {
      if (std::isfinite(v) && !(v > 0.0)) return false;
    }
  }
  return true;
}

std::vector<std::string> varying(const Doc& d, const std::vector<std::string>& candidates) {
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    std::set<std::string> seen;
    for (std::size_t r = 0; r < d.rows.size(); ++r) seen.insert(d.text(r, c));
    if (seen.size() > 1) out.push_back(c);
  }
  return out;
}

fs::path emit(const fs::path& out_dir, const std::string& name, const std::string& svg) {
  const fs::path p = out_dir / name;
  write_svg(p, svg);
  return p;
}

}  // namespace

std::string render(const LinePlot& p) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (p.log_y && !(s.y[i] > 0.0))) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  const Axis x = make_axis(xlo, xhi, false);
  const Axis y = make_axis(ylo, yhi, p.log_y);
  std::string svg = header(p.title) + frame(x, y, p.x_label, p.y_label, true);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const Series& s = p.series[k];
    labels.push_back(s.label);
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (p.log_y && !(s.y[i] > 0.0))) continue;
      pts += fmt::format("{:.2f},{:.2f} ", x.map(s.x[i], kLeft, kWidth - kRight),
                         y.map(s.y[i], kHeight - kBottom, kTop));
    }
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color(k), pts);
  }
  return svg + legend(labels) + "</svg>\n";
}

std::string render(const BarPlot& p) {
  double lo = p.log_y ? std::numeric_limits<double>::infinity() : 0.0;
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& g : p.values) {
    for (const double v : g) {
      if (!std::isfinite(v) || (p.log_y && !(v > 0.0))) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(hi)) hi = 1.0;
  const Axis y = p.log_y ? make_axis(lo, hi, true) : Axis{0.0, hi > 0.0 ? 1.05 * hi : 1.0, false};
  std::string svg = header(p.title) + frame({0.0, 1.0, false}, y, "", p.y_label, false);
  const double x0 = kLeft, x1 = kWidth - kRight, base = kHeight - kBottom;
  const std::size_t ng = std::max<std::size_t>(1, p.values.size());
  const double gw = (x1 - x0) / static_cast<double>(ng);
  const std::size_t ns = std::max<std::size_t>(1, p.series_names.size());
  const double bw = 0.8 * gw / static_cast<double>(ns);
  for (std::size_t g = 0; g < p.values.size(); ++g) {
    for (std::size_t k = 0; k < p.values[g].size(); ++k) {
      const double v = p.values[g][k];
      if (!std::isfinite(v) || (p.log_y && !(v > 0.0))) continue;
      const double top = y.map(v, base, kTop);
      const double bx = x0 + gw * static_cast<double>(g) + 0.1 * gw + bw * static_cast<double>(k);
      svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", bx,
                         top, bw, std::max(0.0, base - top), color(k));
    }
    if (g < p.group_labels.size() && p.values.size() <= 32) {
      const double cx = x0 + gw * (static_cast<double>(g) + 0.5);
      svg += fmt::format("<text x=\"{0:.2f}\" y=\"{1}\" font-family=\"sans-serif\" font-size=\"9\" "
                         "text-anchor=\"end\" transform=\"rotate(-35 {0:.2f} {1})\">{2}</text>\n",
                         cx, base + 12, escape(p.group_labels[g]));
    }
  }
  return svg + legend(p.series_names) + "</svg>\n";
}

std::string render(const Heatmap& h) {
  if (h.nx <= 0 || h.ny <= 0 || h.value.size() != static_cast<std::size_t>(h.nx) * h.ny) {
    throw Error(ErrorCode::InvalidArgument, "heatmap: value size does not match grid");
  }
  const double lo = *std::min_element(h.value.begin(), h.value.end());
  const double hi = *std::max_element(h.value.begin(), h.value.end());
  const double side = std::min(kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  const double cell = side / static_cast<double>(std::max(h.nx, h.ny));
  const double ox = kLeft;
  const double oy = kTop + cell * h.ny;  // y grows upward
  std::string svg = header(h.title);
  for (int y = 0; y < h.ny; ++y) {
    for (int x = 0; x < h.nx; ++x) {
      const double v = h.value[static_cast<std::size_t>(y) * h.nx + x];
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      const int r = static_cast<int>(255 * t);
      const int b = static_cast<int>(255 * (1.0 - t));
      svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"rgb({},{},{})\"/>\n",
                         ox + cell * x, oy - cell * (y + 1), cell + 0.05, cell + 0.05, r, 64, b);
    }
  }
  if (h.u && h.v) {
    double umax = 0.0;
    for (std::size_t i = 0; i < h.u->size(); ++i) umax = std::max(umax, std::hypot((*h.u)[i], (*h.v)[i]));
    const int stride = std::max(1, std::max(h.nx, h.ny) / 16);
    for (int y = stride / 2; y < h.ny && umax > 0.0; y += stride) {
      for (int x = stride / 2; x < h.nx; x += stride) {
        const std::size_t i = static_cast<std::size_t>(y) * h.nx + x;
        const double len = 0.9 * cell * stride / umax;
        const double cx = ox + cell * (x + 0.5);
        const double cy = oy - cell * (y + 0.5);
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"white\" "
                           "stroke-width=\"1\"/>\n",
                           cx, cy, cx + len * (*h.u)[i], cy - len * (*h.v)[i]);
      }
    }
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">min {:.3g}  max {:.3g}</text>\n",
                     kLeft, oy + 20, lo, hi);
  return svg + "</svg>\n";
}

void write_svg(const fs::path& path, const std::string& svg) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
  out << svg;
}

bool has_plot(const std::string& schema) {
  static const std::set<std::string> known{"rmse", "hhl", "hhl_blocks", "velocity", "zeta", "histogram"};
  return known.contains(schema);
}

std::vector<fs::path> plot_csv(const fs::path& csv, const fs::path& out_dir) {
  const Doc d = read_csv(csv);
  if (d.rows.empty()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("plot: {} has no data rows", csv.string()));
  }
  const std::string stem = csv.stem().string();
  std::vector<fs::path> out;

  if (d.schema == "rmse") {
    LinePlot p{"Carleman vs LBM RMSE", "time step", "RMSE", false,
               group_series(d, {"nx", "omega", "order", "v_lid"}, "t", "rmse")};
    p.log_y = all_positive(p.series);
    out.push_back(emit(out_dir, stem + ".svg", render(p)));
  } else if (d.schema == "hhl") {
    std::vector<std::size_t> ok;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
      if (d.text(r, "status") == "ok") ok.push_back(r);
    }
    Doc good = d;
    good.rows.clear();
    for (const auto r : ok) good.rows.push_back(d.rows[r]);
    if (good.rows.empty()) throw Error(ErrorCode::InvalidArgument, fmt::format("plot: {} has no ok rows", csv.string()));

    const auto keys = varying(good, {"nx", "omega", "v_lid", "n_steps", "t0", "c_p", "spectrum_source"});
    LinePlot eps{"HHL fidelity error", "clock qubits", "fidelity error", false,
                 group_series(good, keys, "n_clock", "eps_full")};
    eps.log_y = all_positive(eps.series);
    out.push_back(emit(out_dir, stem + "_eps.svg", render(eps)));

    BarPlot bars{"Success probabilities", "probability", true, {"p_ancilla", "p_success"}, {}, {}};
    const auto row_keys = varying(good, {"nx", "omega", "v_lid", "n_steps", "t0", "n_clock", "c_p", "spectrum_source"});
    for (std::size_t r = 0; r < good.rows.size(); ++r) {
      bars.group_labels.push_back(label_of(good, r, row_keys));
      bars.values.push_back({good.number(r, "p_ancilla"), good.number(r, "p_success")});
    }
    out.push_back(emit(out_dir, stem + "_prob.svg", render(bars)));

    if (varying(good, {"c_p"}).size() == 1) {
      const auto cp_keys = varying(good, {"nx", "omega", "v_lid", "n_steps", "t0", "n_clock", "spectrum_source"});
      LinePlot cp{"Success probability vs C_p", "C_p", "p_success", false,
                  group_series(good, cp_keys, "c_p", "p_success")};
      out.push_back(emit(out_dir, stem + "_cp.svg", render(cp)));
    }
  } else if (d.schema == "hhl_blocks") {
    const auto keys = varying(d, {"nx", "omega", "v_lid", "n_steps", "t0", "n_clock", "c_p", "spectrum_source"});
    LinePlot p{"Fidelity error per time block", "time step", "fidelity error", false, group_series(d, keys, "t", "eps")};
    p.log_y = all_positive(p.series);
    out.push_back(emit(out_dir, stem + ".svg", render(p)));
  } else if (d.schema == "velocity") {
    int nx = 0, ny = 0;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
      nx = std::max(nx, static_cast<int>(d.number(r, "x")) + 1);
      ny = std::max(ny, static_cast<int>(d.number(r, "y")) + 1);
    }
    Heatmap h{"Speed |u| with velocity arrows", nx, ny, {}, std::vector<double>(), std::vector<double>()};
    h.value.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    h.u->assign(h.value.size(), 0.0);
    h.v->assign(h.value.size(), 0.0);
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
      const auto i = static_cast<std::size_t>(d.number(r, "y")) * nx + static_cast<std::size_t>(d.number(r, "x"));
      h.value[i] = d.number(r, "speed");
      (*h.u)[i] = d.number(r, "ux");
      (*h.v)[i] = d.number(r, "uy");
    }
    out.push_back(emit(out_dir, stem + ".svg", render(h)));
  } else if (d.schema == "zeta") {
    BarPlot p{"Spectral deviation zeta", "zeta", false, {"zeta"}, {}, {}};
    const auto keys = varying(d, {"omega", "v_lid", "n_steps", "nx", "ny"});
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
      p.group_labels.push_back(label_of(d, r, keys));
      p.values.push_back({d.number(r, "zeta")});
    }
    out.push_back(emit(out_dir, stem + ".svg", render(p)));
  } else if (d.schema == "histogram") {
    BarPlot p{"Positive eigenvalue histogram", "count", false, {"count"}, {}, {}};
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
      p.group_labels.push_back(fmt::format("{:.3g}", d.number(r, "bin_lo")));
      p.values.push_back({d.number(r, "count")});
    }
    out.push_back(emit(out_dir, stem + ".svg", render(p)));
  } else {
    throw Error(ErrorCode::InvalidArgument, fmt::format("plot: no plot defined for schema '{}'", d.schema));
  }
  return out;
}

}  // namespace qclbm::cli::plot
