#include "qclbm/lbm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "qclbm/error.hpp"

namespace qclbm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DegenerateDensity: return "degenerate_density";
    case ErrorCode::UnstableRelaxation: return "unstable_relaxation";
    case ErrorCode::UnphysicalAmplitude: return "unphysical_amplitude";
    case ErrorCode::UndefinedRatio: return "undefined_ratio";
    case ErrorCode::DimensionCap: return "dimension_cap";
    case ErrorCode::InsufficientClockResolution: return "insufficient_clock_resolution";
    case ErrorCode::InsufficientClockQubits: return "insufficient_clock_qubits";
    case ErrorCode::RotationUndefined: return "rotation_undefined";
    case ErrorCode::PostSelectionImpossible: return "post_selection_impossible";
    case ErrorCode::MismatchedBinning: return "mismatched_binning";
    case ErrorCode::NumericalFailure: return "numerical_failure";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

const char* to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Periodic: return "pbc";
    case BoundaryKind::BounceBack: return "bounceback";
    case BoundaryKind::LidDriven: return "liddriven";
  }
  return "unknown";
}

LatticeGrid::LatticeGrid(int nx, int ny, BoundaryKind kind, Vec2 v_lid)
    : nx_(nx), ny_(ny), boundary_(kind), v_lid_(v_lid) {
  if (nx < 2 || ny < 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("lattice must be at least 2x2, got {}x{}", nx, ny));
  }
  if (kind == BoundaryKind::LidDriven) {
    const double speed2 = v_lid[0] * v_lid[0] + v_lid[1] * v_lid[1];
    if (!(speed2 < VelocitySet::kCs2)) {
      throw Error(ErrorCode::InvalidArgument, "lid velocity must be subsonic (|v_lid| < c_s)");
    }
  }
}

LatticeGrid LatticeGrid::periodic(int nx, int ny) {
  return LatticeGrid(nx, ny, BoundaryKind::Periodic, {0.0, 0.0});
}
LatticeGrid LatticeGrid::bounce_back(int nx, int ny) {
  return LatticeGrid(nx, ny, BoundaryKind::BounceBack, {0.0, 0.0});
}
LatticeGrid LatticeGrid::lid_driven(int nx, int ny, Vec2 v_lid) {
  return LatticeGrid(nx, ny, BoundaryKind::LidDriven, v_lid);
}

DistributionField::DistributionField(int nx, int ny, std::size_t time_index)
    : nx_(nx), ny_(ny), time_index_(time_index),
      values_(static_cast<std::size_t>(nx) * ny * kQ, 0.0) {}

DistributionField::DistributionField(int nx, int ny, std::vector<double> values,
                                     std::size_t time_index)
    : nx_(nx), ny_(ny), time_index_(time_index), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(nx) * ny * kQ) {
    throw Error(ErrorCode::InvalidArgument, "field size does not match lattice dimensions");
  }
}

namespace lbm {

double density(const DistributionField& field, std::size_t site) {
  double rho = 0.0;
  for (double f : field.site_values(site)) rho += f;
  return rho;
}

Vec2 velocity(const DistributionField& field, std::size_t site) {
  const double rho = density(field, site);
  if (rho == 0.0) {
    throw Error(ErrorCode::DegenerateDensity,
                fmt::format("degenerate density at site {}", site));
  }
  Vec2 j{0.0, 0.0};
  const auto f = field.site_values(site);
  for (int i = 0; i < kQ; ++i) {
    j[0] += VelocitySet::e[i][0] * f[i];
    j[1] += VelocitySet::e[i][1] * f[i];
  }
  return {j[0] / rho, j[1] / rho};
}

std::array<double, kQ> equilibrium(double rho, const Vec2& u) {
  constexpr double cs2 = VelocitySet::kCs2;
  const double uu = u[0] * u[0] + u[1] * u[1];
  std::array<double, kQ> feq{};
  for (int i = 0; i < kQ; ++i) {
    const double eu = VelocitySet::dot(i, u);
    feq[i] = VelocitySet::w[i] * rho *
             (1.0 + eu / cs2 + eu * eu / (2.0 * cs2 * cs2) - uu / (2.0 * cs2));
  }
  return feq;
}

DistributionField collide_bgk(const DistributionField& field, double omega) {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw Error(ErrorCode::UnstableRelaxation,
                fmt::format("unstable relaxation: omega = {} outside (0, 2)", omega));
  }
  DistributionField out(field.nx(), field.ny(), field.time_index());
  for (std::size_t n = 0; n < field.sites(); ++n) {
    const auto feq = equilibrium(density(field, n), velocity(field, n));
    const auto f = field.site_values(n);
    auto g = out.site_values(n);
    for (int i = 0; i < kQ; ++i) g[i] = (1.0 - omega) * f[i] + omega * feq[i];
  }
  return out;
}

DistributionField stream(const DistributionField& field, const LatticeGrid& grid) {
  if (!field.matches(grid)) {
    throw Error(ErrorCode::InvalidArgument, "field dimensions do not match grid");
  }
  const int nx = grid.nx();
  const int ny = grid.ny();
  DistributionField out(nx, ny, field.time_index() + 1);

  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const std::size_t n = grid.site(x, y);
      for (int i = 0; i < kQ; ++i) {
        const int tx = x + VelocitySet::e[i][0];
        const int ty = y + VelocitySet::e[i][1];
        if (grid.boundary() == BoundaryKind::Periodic) {
          out(grid.site((tx + nx) % nx, (ty + ny) % ny), i) = field(n, i);
        } else if (grid.inside(tx, ty)) {
          out(grid.site(tx, ty), i) = field(n, i);
        } else {
          out(n, VelocitySet::opposite[i]) = field(n, i);
        }
      }
    }
  }

  if (grid.boundary() == BoundaryKind::LidDriven) {
    // Moving-wall correction on top of bounce-back, with the wall density
    // taken as the sum of the populations present at the node after the
    // bounce-back pass (a linear expression in f*).
    const Vec2& v = grid.lid_velocity();
    for (int y = 1; y < ny - 1; ++y) {
      const std::size_t n = grid.site(0, y);
      const double rho_w = density(out, n);
      for (int i = 0; i < kQ; ++i) {
        if (VelocitySet::e[i][0] != -1) continue;
        const double coef =
            -2.0 * VelocitySet::w[i] * VelocitySet::dot(i, v) / VelocitySet::kCs2;
        out(n, VelocitySet::opposite[i]) += coef * rho_w;
      }
    }
  }
  return out;
}

DistributionField lbm_step(const DistributionField& field, const LatticeGrid& grid,
                           double omega) {
  return stream(collide_bgk(field, omega), grid);
}

double total_mass(const DistributionField& field) {
  double m = 0.0;
  for (double f : field.values()) m += f;
  return m;
}

Vec2 total_momentum(const DistributionField& field) {
  Vec2 p{0.0, 0.0};
  for (std::size_t n = 0; n < field.sites(); ++n) {
    const auto f = field.site_values(n);
    for (int i = 0; i < kQ; ++i) {
      p[0] += VelocitySet::e[i][0] * f[i];
      p[1] += VelocitySet::e[i][1] * f[i];
    }
  }
  return p;
}

DistributionField init_kolmogorov(const LatticeGrid& grid, const KolmogorovParams& p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  DistributionField out(grid.nx(), grid.ny());
  for (int y = 0; y < grid.ny(); ++y) {
    for (int x = 0; x < grid.nx(); ++x) {
      const double factor = 1.0 + p.a_x * std::cos(two_pi * p.k_x * y / grid.ny()) +
                            p.a_y * std::cos(two_pi * p.k_y * x / grid.nx());
      const std::size_t n = grid.site(x, y);
      for (int i = 0; i < kQ; ++i) {
        const double f = VelocitySet::w[i] * factor;
        if (!(f > 0.0)) {
          throw Error(ErrorCode::UnphysicalAmplitude,
                      fmt::format("unphysical amplitude: f <= 0 at site ({}, {})", x, y));
        }
        out(n, i) = f;
      }
    }
  }
  return out;
}

DistributionField init_lid(const LatticeGrid& grid, const Vec2& v_lid) {
  DistributionField out(grid.nx(), grid.ny());
  for (int y = 0; y < grid.ny(); ++y) {
    for (int x = 0; x < grid.nx(); ++x) {
      const std::size_t n = grid.site(x, y);
      const bool at_lid = (x == 0);
      for (int i = 0; i < kQ; ++i) {
        const double drive = at_lid ? VelocitySet::dot(i, v_lid) / VelocitySet::kCs2 : 0.0;
        out(n, i) = VelocitySet::w[i] * (1.0 + drive);
      }
    }
  }
  return out;
}

double viscosity(double omega) { return VelocitySet::kCs2 * (1.0 / omega - 0.5); }

double reynolds(double omega, double length, double speed) {
  return speed * length / viscosity(omega);
}

double max_speed(const DistributionField& field) {
  double best = 0.0;
  for (std::size_t n = 0; n < field.sites(); ++n) {
    const Vec2 u = velocity(field, n);
    best = std::max(best, std::hypot(u[0], u[1]));
  }
  return best;
}

}  // namespace lbm
}  // namespace qclbm
