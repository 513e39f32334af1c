#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qclbm/lattice.hpp"

namespace qclbm::carleman {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Matrix9 = Eigen::Matrix<double, kQ, kQ>;

/// D_ij = (1 - omega) delta_ij + omega w_i (1 + e_i.e_j / c_s^2).
/// Accepts omega in [0, 2); omega = 0 is the collisionless identity.
Matrix9 build_collision_first(double omega);

/// E_ijk = (omega w_i / c_s^4) (e_i.e_j e_i.e_k - c_s^2 e_j.e_k).
class CollisionTensor {
 public:
  CollisionTensor() = default;
  explicit CollisionTensor(std::array<Matrix9, kQ> slices) : slices_(std::move(slices)) {}

  double operator()(int i, int j, int k) const { return slices_[i](j, k); }
  /// Slice i as a (j, k) matrix.
  const Matrix9& slice(int i) const { return slices_[i]; }

 private:
  std::array<Matrix9, kQ> slices_{};
};

CollisionTensor build_collision_second(double omega);

struct StreamingMatrix {
  SparseMatrix matrix;
  BoundaryKind boundary;
};

/// Row (n, i) receives from column (n - e_i, i) in the interior; periodic
/// rows wrap, bounce-back rows take (n, opposite(i)), and lid rows add the
/// wall-density terms of the moving-wall rule.
StreamingMatrix build_streaming(const LatticeGrid& grid);

/// blockdiag(block, ..., block) with `sites` copies.
SparseMatrix block_diagonal(const Matrix9& block, std::size_t sites);

/// First-order Carleman operator C1 = S * blockdiag(D).
SparseMatrix carleman_matrix_first(const LatticeGrid& grid, double omega);

/// Materialized second-order operators for small lattices. The pair state
/// g has index (n, j) x (m, k) -> (9n + j) * QL + (9m + k).
struct DenseSecondOrder {
  SparseMatrix stream_kron;     // S (x) S
  SparseMatrix collision_kron;  // blockdiag(D) (x) blockdiag(D)
  SparseMatrix pair_collision;  // QL x (QL)^2, E restricted to same-site pairs
};

/// Largest QL for which DenseSecondOrder is built (a 4x4 lattice).
inline constexpr std::size_t kDenseSecondOrderCap = 16 * kQ;

class CarlemanSystem {
 public:
  CarlemanSystem(const LatticeGrid& grid, double omega, int order,
                 bool with_dense_second_order = false);

  int order() const { return order_; }
  double omega() const { return omega_; }
  const LatticeGrid& grid() const { return grid_; }
  std::size_t state_size() const { return grid_.state_size(); }

  const Matrix9& collision_first() const { return d_; }
  const CollisionTensor& collision_second() const { return e_; }
  const SparseMatrix& streaming() const { return s_; }
  const SparseMatrix& first_order() const { return c1_; }
  const std::optional<DenseSecondOrder>& dense_second_order() const { return dense_; }

  /// out(n, i) = sum_jk E_ijk h(n, j) h(n, k), i.e. E applied to the
  /// same-site products of the rank-1 pair state h (x) h.
  Eigen::VectorXd contract_local(const Eigen::VectorXd& h) const;

 private:
  LatticeGrid grid_;
  double omega_;
  int order_;
  Matrix9 d_;
  CollisionTensor e_;
  SparseMatrix s_;
  SparseMatrix c1_;
  std::optional<DenseSecondOrder> dense_;
};

/// Truncated Carleman state. For order 2 the pair block g = h (x) h is kept
/// as the factor h; g_dense is only carried for small-lattice validation.
struct CarlemanState {
  Eigen::VectorXd f;
  Eigen::VectorXd h;
  std::optional<Eigen::VectorXd> g_dense;
  std::size_t time_index = 0;
};

CarlemanState make_state(const DistributionField& field, const CarlemanSystem& system,
                         bool with_dense_pairs = false);

/// Returns steps + 1 states, the first being `initial`.
std::vector<CarlemanState> evolve_carleman(const CarlemanState& initial,
                                           const CarlemanSystem& system, std::size_t steps);

/// One step of the recursion, as used by evolve_carleman.
CarlemanState step(const CarlemanState& state, const CarlemanSystem& system);

Eigen::VectorXd flatten(const DistributionField& field);
DistributionField unflatten(const Eigen::VectorXd& f, int nx, int ny, std::size_t time_index = 0);

/// Mean over directions of the per-direction RMS of 1 - f_C / f_LBM.
double rmse(std::span<const double> f_carleman, std::span<const double> f_lbm);

}  // namespace qclbm::carleman
