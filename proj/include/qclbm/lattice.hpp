#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qclbm {

using Vec2 = std::array<double, 2>;

/// D2Q9 stencil. Direction order, weights and opposites follow the usual
/// (rest, axis x4, diagonal x4) layout with counter-clockwise numbering.
struct VelocitySet {
  static constexpr int kQ = 9;
  static constexpr double kCs2 = 1.0 / 3.0;

  static constexpr std::array<std::array<int, 2>, kQ> e{{
      {0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1},
  }};

  static constexpr std::array<double, kQ> w{
      4.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0, 1.0 / 9.0,
      1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
  };

  static constexpr std::array<int, kQ> opposite{0, 3, 4, 1, 2, 7, 8, 5, 6};

  static constexpr int dot(int i, int j) {
    return e[i][0] * e[j][0] + e[i][1] * e[j][1];
  }
  static constexpr double dot(int i, const Vec2& u) {
    return e[i][0] * u[0] + e[i][1] * u[1];
  }
};

inline constexpr int kQ = VelocitySet::kQ;

enum class BoundaryKind { Periodic, BounceBack, LidDriven };

const char* to_string(BoundaryKind kind);

/// Rectangular lattice of nx * ny sites. Walls for the closed boundary kinds
/// sit halfway between the outermost nodes and the domain edge. For the
/// lid-driven cavity the moving wall is the left one (x = -1/2).
class LatticeGrid {
 public:
  static LatticeGrid periodic(int nx, int ny);
  static LatticeGrid bounce_back(int nx, int ny);
  static LatticeGrid lid_driven(int nx, int ny, Vec2 v_lid);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t sites() const { return static_cast<std::size_t>(nx_) * ny_; }
  /// Length of a flattened field, site-major then direction.
  std::size_t state_size() const { return sites() * kQ; }
  BoundaryKind boundary() const { return boundary_; }
  const Vec2& lid_velocity() const { return v_lid_; }

  std::size_t site(int x, int y) const {
    return static_cast<std::size_t>(y) * nx_ + static_cast<std::size_t>(x);
  }
  std::pair<int, int> coords(std::size_t site) const {
    return {static_cast<int>(site % nx_), static_cast<int>(site / nx_)};
  }
  bool inside(int x, int y) const { return x >= 0 && x < nx_ && y >= 0 && y < ny_; }

  /// Sites touching the moving wall, excluding the two corners which keep
  /// plain bounce-back.
  bool is_lid_site(int x, int y) const {
    return boundary_ == BoundaryKind::LidDriven && x == 0 && y > 0 && y < ny_ - 1;
  }

  bool operator==(const LatticeGrid&) const = default;

 private:
  LatticeGrid(int nx, int ny, BoundaryKind kind, Vec2 v_lid);

  int nx_;
  int ny_;
  BoundaryKind boundary_;
  Vec2 v_lid_;
};

/// Populations f_i(t, n), stored as values[site * 9 + direction].
class DistributionField {
 public:
  DistributionField(int nx, int ny, std::size_t time_index = 0);
  DistributionField(int nx, int ny, std::vector<double> values, std::size_t time_index = 0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t sites() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t time_index() const { return time_index_; }
  void set_time_index(std::size_t t) { time_index_ = t; }

  double& operator()(std::size_t site, int dir) { return values_[site * kQ + dir]; }
  double operator()(std::size_t site, int dir) const { return values_[site * kQ + dir]; }

  std::span<const double> site_values(std::size_t site) const {
    return std::span<const double>(values_).subspan(site * kQ, kQ);
  }
  std::span<double> site_values(std::size_t site) {
    return std::span<double>(values_).subspan(site * kQ, kQ);
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool matches(const LatticeGrid& grid) const {
    return grid.nx() == nx_ && grid.ny() == ny_;
  }

 private:
  int nx_;
  int ny_;
  std::size_t time_index_;
  std::vector<double> values_;
};

}  // namespace qclbm
