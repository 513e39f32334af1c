#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qclbm/hhl.hpp"
#include "qclbm/lattice.hpp"
#include "qclbm/lbm.hpp"

namespace qclbm::cli {

struct RunConfig {
  BoundaryKind use_case = BoundaryKind::BounceBack;
  std::vector<int> nx{8};
  std::vector<int> ny;  // empty: square grids
  std::vector<double> omega{1.1, 1.5};
  std::vector<int> carleman_order{1, 2};
  int rmse_steps = 200;
  std::vector<int> n_steps{1, 3, 7};
  std::vector<int> t0{0, 20, 40};
  std::vector<int> n_clock{7};
  std::vector<double> c_p{1.0};
  std::vector<double> v_lid{0.075};  // lid speed along +y
  hhl::SpectrumSource spectrum_source = hhl::SpectrumSource::Exact;
  int reference_nx = 4;  // substitution source and zeta reference
  lbm::KolmogorovParams init;
  double bin_width = 3.5 / 128.0;
  long long dimension_cap = 1LL << 14;
  std::uint64_t q_tilde = 256;

  int ny_for(std::size_t i) const { return ny.empty() ? nx[i] : ny[i]; }
};

/// Parses and validates; unknown keys are rejected. Every list-valued field
/// also accepts a scalar.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

BoundaryKind parse_use_case(const std::string& name);

/// Grid for one sweep point; v_lid is ignored unless lid-driven.
LatticeGrid make_grid(BoundaryKind use_case, int nx, int ny, double v_lid);
DistributionField initial_field(const LatticeGrid& grid, const lbm::KolmogorovParams& init);

}  // namespace qclbm::cli
