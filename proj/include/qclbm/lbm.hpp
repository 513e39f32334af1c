#pragma once

#include <array>
#include <cstddef>

#include "qclbm/lattice.hpp"

namespace qclbm::lbm {

double density(const DistributionField& field, std::size_t site);

/// Throws DegenerateDensity when the site carries no mass.
Vec2 velocity(const DistributionField& field, std::size_t site);

/// Second-order Maxwell-Boltzmann equilibrium with c_s^2 = 1/3.
std::array<double, kQ> equilibrium(double rho, const Vec2& u);

/// BGK relaxation f* = (1 - omega) f + omega f^eq, site by site.
DistributionField collide_bgk(const DistributionField& field, double omega);

DistributionField stream(const DistributionField& field, const LatticeGrid& grid);

DistributionField lbm_step(const DistributionField& field, const LatticeGrid& grid, double omega);

double total_mass(const DistributionField& field);
Vec2 total_momentum(const DistributionField& field);

struct KolmogorovParams {
  double a_x = 0.3;
  double a_y = 0.3;
  int k_x = 1;
  int k_y = 1;
};

/// f_i = w_i [1 + A_x cos(2 pi k_x y / N_y) + A_y cos(2 pi k_y x / N_x)].
/// The k_x <-> y pairing is kept exactly as the reference formula prints it.
DistributionField init_kolmogorov(const LatticeGrid& grid, const KolmogorovParams& params);

/// Fluid at rest with unit density; the column next to the moving wall gets
/// f_i = w_i (1 + e_i . v_lid / c_s^2), i.e. velocity v_lid.
DistributionField init_lid(const LatticeGrid& grid, const Vec2& v_lid);

/// Kinematic viscosity c_s^2 (1/omega - 1/2) and the derived Reynolds number
/// u L / nu. Reporting metadata only.
double viscosity(double omega);
double reynolds(double omega, double length, double speed);
double max_speed(const DistributionField& field);

}  // namespace qclbm::lbm
