#include "qclbm/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "qclbm/error.hpp"

namespace qclbm::cli {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

template <class T>
T scalar(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) invalid(fmt::format("config '{}': expected an integer", key));
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) invalid(fmt::format("config '{}': expected a number", key));
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    invalid(fmt::format("config '{}': {}", key, e.what()));
  }
}

template <class T>
std::vector<T> list(const json& v, const std::string& key) {
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(scalar<T>(x, key));
  } else {
    out.push_back(scalar<T>(v, key));
  }
  if (out.empty()) invalid(fmt::format("config '{}': list must not be empty", key));
  return out;
}

hhl::SpectrumSource parse_source(const std::string& s) {
  if (s == "exact") return hhl::SpectrumSource::Exact;
  if (s == "substituted") return hhl::SpectrumSource::Substituted;
  invalid(fmt::format("config 'spectrum_source': expected exact or substituted, got '{}'", s));
}

template <class T, class Pred>
void each(const std::vector<T>& v, const char* key, Pred ok, const char* what) {
  for (const auto& x : v) {
    if (!ok(x)) invalid(fmt::format("config '{}': value {} {}", key, x, what));
  }
}

}  // namespace

BoundaryKind parse_use_case(const std::string& name) {
  if (name == "pbc") return BoundaryKind::Periodic;
  if (name == "bounceback") return BoundaryKind::BounceBack;
  if (name == "liddriven") return BoundaryKind::LidDriven;
  invalid(fmt::format("unknown use case '{}' (expected pbc, bounceback or liddriven)", name));
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  static const std::set<std::string> known{
      "use_case", "nx",        "ny",          "omega",         "carleman_order", "rmse_steps",
      "n_steps",  "t0",        "n_clock",     "c_p",           "v_lid",          "spectrum_source",
      "reference_nx", "init",  "bin_width",   "dimension_cap", "q_tilde"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) invalid(fmt::format("unknown config key '{}'", key));
  }

  RunConfig c;
  if (j.contains("use_case")) c.use_case = parse_use_case(scalar<std::string>(j["use_case"], "use_case"));
  if (j.contains("nx")) c.nx = list<int>(j["nx"], "nx");
  if (j.contains("ny")) c.ny = list<int>(j["ny"], "ny");
  if (j.contains("omega")) c.omega = list<double>(j["omega"], "omega");
  if (j.contains("carleman_order")) c.carleman_order = list<int>(j["carleman_order"], "carleman_order");
  if (j.contains("rmse_steps")) c.rmse_steps = scalar<int>(j["rmse_steps"], "rmse_steps");
  if (j.contains("n_steps")) c.n_steps = list<int>(j["n_steps"], "n_steps");
  if (j.contains("t0")) c.t0 = list<int>(j["t0"], "t0");
  if (j.contains("n_clock")) c.n_clock = list<int>(j["n_clock"], "n_clock");
  if (j.contains("c_p")) c.c_p = list<double>(j["c_p"], "c_p");
  if (j.contains("v_lid")) c.v_lid = list<double>(j["v_lid"], "v_lid");
  if (j.contains("spectrum_source")) {
    c.spectrum_source = parse_source(scalar<std::string>(j["spectrum_source"], "spectrum_source"));
  }
  if (j.contains("reference_nx")) c.reference_nx = scalar<int>(j["reference_nx"], "reference_nx");
  if (j.contains("init")) {
    const json& in = j["init"];
    if (!in.is_object()) invalid("config 'init' must be an object");
    for (const auto& [key, v] : in.items()) {
      if (key == "a_x") c.init.a_x = scalar<double>(v, "init.a_x");
      else if (key == "a_y") c.init.a_y = scalar<double>(v, "init.a_y");
      else if (key == "k_x") c.init.k_x = scalar<int>(v, "init.k_x");
      else if (key == "k_y") c.init.k_y = scalar<int>(v, "init.k_y");
      else invalid(fmt::format("unknown config key 'init.{}'", key));
    }
  }
  if (j.contains("bin_width")) c.bin_width = scalar<double>(j["bin_width"], "bin_width");
  if (j.contains("dimension_cap")) c.dimension_cap = scalar<long long>(j["dimension_cap"], "dimension_cap");
  if (j.contains("q_tilde")) c.q_tilde = scalar<std::uint64_t>(j["q_tilde"], "q_tilde");
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot read config {}", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    invalid(fmt::format("config {}: {}", path.string(), e.what()));
  }
  return parse_config(j);
}

void validate(const RunConfig& c) {
  each(c.nx, "nx", [](int v) { return v >= 2 && v <= 4096; }, "must be in [2, 4096]");
  if (!c.ny.empty()) {
    if (c.ny.size() != c.nx.size()) invalid("config 'ny' must have as many entries as 'nx'");
    each(c.ny, "ny", [](int v) { return v >= 2 && v <= 4096; }, "must be in [2, 4096]");
  }
  each(c.omega, "omega", [](double v) { return v > 0.0 && v < 2.0; }, "must lie in (0, 2)");
  each(c.carleman_order, "carleman_order", [](int v) { return v == 1 || v == 2; }, "must be 1 or 2");
  if (c.rmse_steps < 1) invalid("config 'rmse_steps' must be >= 1");
  each(c.n_steps, "n_steps", [](int v) { return v >= 1; }, "must be >= 1");
  each(c.t0, "t0", [](int v) { return v >= 0; }, "must be >= 0");
  each(c.n_clock, "n_clock", [](int v) { return v >= 1 && v <= 24; }, "must be in [1, 24]");
  each(c.c_p, "c_p", [](double v) { return v > 0.0 && std::isfinite(v); }, "must be > 0");
  const double cs = std::sqrt(VelocitySet::kCs2);
  each(c.v_lid, "v_lid", [cs](double v) { return std::abs(v) < cs; }, "must be below the lattice sound speed");
  if (c.reference_nx < 2) invalid("config 'reference_nx' must be >= 2");
  if (!(c.bin_width > 0.0)) invalid("config 'bin_width' must be > 0");
  if (c.dimension_cap < 2) invalid("config 'dimension_cap' must be >= 2");
  if (c.q_tilde == 0) invalid("config 'q_tilde' must be > 0");
  if (c.use_case != BoundaryKind::LidDriven) {
    // Surfaces a non-positive initial amplitude before any run starts.
    for (std::size_t i = 0; i < c.nx.size(); ++i) {
      initial_field(make_grid(c.use_case, c.nx[i], c.ny_for(i), 0.0), c.init);
    }
  }
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["use_case"] = to_string(c.use_case);
  j["nx"] = c.nx;
  if (!c.ny.empty()) j["ny"] = c.ny;
  j["omega"] = c.omega;
  j["carleman_order"] = c.carleman_order;
  j["rmse_steps"] = c.rmse_steps;
  j["n_steps"] = c.n_steps;
  j["t0"] = c.t0;
  j["n_clock"] = c.n_clock;
  j["c_p"] = c.c_p;
  j["v_lid"] = c.v_lid;
  j["spectrum_source"] = c.spectrum_source == hhl::SpectrumSource::Exact ? "exact" : "substituted";
  j["reference_nx"] = c.reference_nx;
  j["init"] = {{"a_x", c.init.a_x}, {"a_y", c.init.a_y}, {"k_x", c.init.k_x}, {"k_y", c.init.k_y}};
  j["bin_width"] = c.bin_width;
  j["dimension_cap"] = c.dimension_cap;
  j["q_tilde"] = c.q_tilde;
  return j;
}

LatticeGrid make_grid(BoundaryKind use_case, int nx, int ny, double v_lid) {
  switch (use_case) {
    case BoundaryKind::Periodic: return LatticeGrid::periodic(nx, ny);
    case BoundaryKind::BounceBack: return LatticeGrid::bounce_back(nx, ny);
    case BoundaryKind::LidDriven: return LatticeGrid::lid_driven(nx, ny, Vec2{0.0, v_lid});
  }
  invalid("unknown boundary kind");
}

DistributionField initial_field(const LatticeGrid& grid, const lbm::KolmogorovParams& init) {
  if (grid.boundary() == BoundaryKind::LidDriven) return lbm::init_lid(grid, grid.lid_velocity());
  return lbm::init_kolmogorov(grid, init);
}

}  // namespace qclbm::cli
