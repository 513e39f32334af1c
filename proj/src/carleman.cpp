#include "qclbm/carleman.hpp"

#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "qclbm/error.hpp"

namespace qclbm::carleman {

namespace {

using Triplet = Eigen::Triplet<double>;

void check_omega(double omega) {
  if (!(omega >= 0.0 && omega < 2.0)) {
    throw Error(ErrorCode::UnstableRelaxation,
                fmt::format("unstable relaxation: omega = {} outside [0, 2)", omega));
  }
}

std::size_t flat(std::size_t site, int dir) { return site * kQ + static_cast<std::size_t>(dir); }

SparseMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet>& t) {
  SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

Matrix9 build_collision_first(double omega) {
  check_omega(omega);
  Matrix9 d;
  for (int i = 0; i < kQ; ++i) {
    for (int j = 0; j < kQ; ++j) {
      d(i, j) = (i == j ? 1.0 - omega : 0.0) +
                omega * VelocitySet::w[i] * (1.0 + VelocitySet::dot(i, j) / VelocitySet::kCs2);
    }
  }
  return d;
}

CollisionTensor build_collision_second(double omega) {
  check_omega(omega);
  constexpr double cs2 = VelocitySet::kCs2;
  std::array<Matrix9, kQ> slices;
  for (int i = 0; i < kQ; ++i) {
    const double scale = omega * VelocitySet::w[i] / (cs2 * cs2);
    for (int j = 0; j < kQ; ++j) {
      for (int k = 0; k < kQ; ++k) {
        slices[i](j, k) = scale * (VelocitySet::dot(i, j) * VelocitySet::dot(i, k) -
                                   cs2 * VelocitySet::dot(j, k));
      }
    }
  }
  return CollisionTensor(slices);
}

StreamingMatrix build_streaming(const LatticeGrid& grid) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const std::size_t size = grid.state_size();
  std::vector<Triplet> t;
  t.reserve(size + 64 * static_cast<std::size_t>(ny));

  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const std::size_t n = grid.site(x, y);
      for (int i = 0; i < kQ; ++i) {
        const int sx = x - VelocitySet::e[i][0];
        const int sy = y - VelocitySet::e[i][1];
        const auto row = static_cast<int>(flat(n, i));
        if (grid.boundary() == BoundaryKind::Periodic) {
          const std::size_t src = grid.site((sx + nx) % nx, (sy + ny) % ny);
          t.emplace_back(row, static_cast<int>(flat(src, i)), 1.0);
        } else if (grid.inside(sx, sy)) {
          t.emplace_back(row, static_cast<int>(flat(grid.site(sx, sy), i)), 1.0);
        } else {
          t.emplace_back(row, static_cast<int>(flat(n, VelocitySet::opposite[i])), 1.0);
        }
      }

      if (!grid.is_lid_site(x, y)) continue;
      // Rows (n, ibar) for populations i hitting the moving wall pick up
      // coef * rho_w, rho_w being the bounce-back streamed density at n.
      const Vec2& v = grid.lid_velocity();
      for (int i = 0; i < kQ; ++i) {
        if (VelocitySet::e[i][0] != -1) continue;
        const double coef =
            -2.0 * VelocitySet::w[i] * VelocitySet::dot(i, v) / VelocitySet::kCs2;
        if (coef == 0.0) continue;
        const auto row = static_cast<int>(flat(n, VelocitySet::opposite[i]));
        for (int j = 0; j < kQ; ++j) {
          const int sx = x - VelocitySet::e[j][0];
          const int sy = y - VelocitySet::e[j][1];
          const std::size_t col = grid.inside(sx, sy) ? flat(grid.site(sx, sy), j)
                                                      : flat(n, VelocitySet::opposite[j]);
          t.emplace_back(row, static_cast<int>(col), coef);
        }
      }
    }
  }
  // Duplicates (the bounce entry and its rho_w term) are summed on assembly.
  return {from_triplets(size, size, t), grid.boundary()};
}

SparseMatrix block_diagonal(const Matrix9& block, std::size_t sites) {
  std::vector<Triplet> t;
  t.reserve(sites * kQ * kQ);
  for (std::size_t n = 0; n < sites; ++n) {
    for (int i = 0; i < kQ; ++i) {
      for (int j = 0; j < kQ; ++j) {
        if (block(i, j) != 0.0) {
          t.emplace_back(static_cast<int>(flat(n, i)), static_cast<int>(flat(n, j)), block(i, j));
        }
      }
    }
  }
  return from_triplets(sites * kQ, sites * kQ, t);
}

SparseMatrix carleman_matrix_first(const LatticeGrid& grid, double omega) {
  const SparseMatrix s = build_streaming(grid).matrix;
  SparseMatrix c = s * block_diagonal(build_collision_first(omega), grid.sites());
  c.makeCompressed();
  return c;
}

CarlemanSystem::CarlemanSystem(const LatticeGrid& grid, double omega, int order,
                               bool with_dense_second_order)
    : grid_(grid), omega_(omega), order_(order) {
  if (order != 1 && order != 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("Carleman order must be 1 or 2, got {}", order));
  }
  d_ = build_collision_first(omega);
  e_ = build_collision_second(omega);
  s_ = build_streaming(grid).matrix;
  const SparseMatrix bd = block_diagonal(d_, grid.sites());
  c1_ = s_ * bd;
  c1_.makeCompressed();

  if (!with_dense_second_order) return;
  const std::size_t ql = grid.state_size();
  if (ql > kDenseSecondOrderCap) {
    throw Error(ErrorCode::DimensionCap,
                fmt::format("dense second-order operators need QL <= {}, got {}",
                            kDenseSecondOrderCap, ql));
  }
  DenseSecondOrder dense;
  dense.stream_kron = Eigen::kroneckerProduct(s_, s_).eval();
  dense.collision_kron = Eigen::kroneckerProduct(bd, bd).eval();

  std::vector<Triplet> t;
  for (std::size_t n = 0; n < grid.sites(); ++n) {
    for (int i = 0; i < kQ; ++i) {
      for (int j = 0; j < kQ; ++j) {
        for (int k = 0; k < kQ; ++k) {
          const double v = e_(i, j, k);
          if (v == 0.0) continue;
          const std::size_t col = flat(n, j) * ql + flat(n, k);
          t.emplace_back(static_cast<int>(flat(n, i)), static_cast<int>(col), v);
        }
      }
    }
  }
  dense.pair_collision = from_triplets(ql, ql * ql, t);
  dense_ = std::move(dense);
}

Eigen::VectorXd CarlemanSystem::contract_local(const Eigen::VectorXd& h) const {
  Eigen::VectorXd out(h.size());
  for (std::size_t n = 0; n < grid_.sites(); ++n) {
    const auto hn = h.segment<kQ>(static_cast<Eigen::Index>(n * kQ));
    for (int i = 0; i < kQ; ++i) {
      out(static_cast<Eigen::Index>(flat(n, i))) = hn.dot(e_.slice(i) * hn);
    }
  }
  return out;
}

Eigen::VectorXd flatten(const DistributionField& field) {
  return Eigen::Map<const Eigen::VectorXd>(field.values().data(),
                                           static_cast<Eigen::Index>(field.values().size()));
}

DistributionField unflatten(const Eigen::VectorXd& f, int nx, int ny, std::size_t time_index) {
  return DistributionField(nx, ny, std::vector<double>(f.data(), f.data() + f.size()),
                           time_index);
}

CarlemanState make_state(const DistributionField& field, const CarlemanSystem& system,
                         bool with_dense_pairs) {
  if (!field.matches(system.grid())) {
    throw Error(ErrorCode::InvalidArgument, "field dimensions do not match Carleman system");
  }
  CarlemanState state;
  state.f = flatten(field);
  state.time_index = field.time_index();
  if (system.order() == 2) {
    state.h = state.f;
    if (with_dense_pairs) {
      if (!system.dense_second_order()) {
        throw Error(ErrorCode::InvalidArgument,
                    "dense pair state requested but system has no dense operators");
      }
      const Eigen::Index ql = state.f.size();
      Eigen::VectorXd g(ql * ql);
      for (Eigen::Index a = 0; a < ql; ++a) g.segment(a * ql, ql) = state.f(a) * state.f;
      state.g_dense = std::move(g);
    }
  }
  return state;
}

CarlemanState step(const CarlemanState& state, const CarlemanSystem& system) {
  CarlemanState next;
  next.time_index = state.time_index + 1;
  if (system.order() == 1) {
    next.f = system.first_order() * state.f;
    return next;
  }

  const Matrix9& d = system.collision_first();
  Eigen::VectorXd post(state.f.size());
  for (Eigen::Index n = 0; n < state.f.size() / kQ; ++n) {
    post.segment<kQ>(n * kQ) = d * state.f.segment<kQ>(n * kQ);
  }

  if (state.g_dense) {
    const auto& dense = *system.dense_second_order();
    post += dense.pair_collision * *state.g_dense;
    Eigen::VectorXd g = dense.collision_kron * *state.g_dense;
    next.g_dense = dense.stream_kron * g;
  } else {
    post += system.contract_local(state.h);
  }
  next.f = system.streaming() * post;
  next.h = system.first_order() * state.h;
  return next;
}

std::vector<CarlemanState> evolve_carleman(const CarlemanState& initial,
                                           const CarlemanSystem& system, std::size_t steps) {
  if (static_cast<std::size_t>(initial.f.size()) != system.state_size()) {
    throw Error(ErrorCode::InvalidArgument, "state size does not match Carleman system");
  }
  if (system.order() == 2 && initial.h.size() != initial.f.size()) {
    throw Error(ErrorCode::InvalidArgument, "second-order state is missing its pair factor");
  }
  std::vector<CarlemanState> trajectory;
  trajectory.reserve(steps + 1);
  trajectory.push_back(initial);
  for (std::size_t t = 0; t < steps; ++t) trajectory.push_back(step(trajectory.back(), system));
  return trajectory;
}

double rmse(std::span<const double> f_carleman, std::span<const double> f_lbm) {
  if (f_carleman.size() != f_lbm.size() || f_lbm.size() % kQ != 0 || f_lbm.empty()) {
    throw Error(ErrorCode::InvalidArgument, "rmse: fields must have equal, 9-divisible sizes");
  }
  const std::size_t sites = f_lbm.size() / kQ;
  double total = 0.0;
  for (int i = 0; i < kQ; ++i) {
    double sq = 0.0;
    for (std::size_t n = 0; n < sites; ++n) {
      const double ref = f_lbm[n * kQ + i];
      if (ref == 0.0) {
        throw Error(ErrorCode::UndefinedRatio,
                    fmt::format("undefined ratio: f_LBM is zero at site {}, direction {}", n, i));
      }
      const double r = 1.0 - f_carleman[n * kQ + i] / ref;
      sq += r * r;
    }
    total += std::sqrt(sq / static_cast<double>(sites));
  }
  return total / kQ;
}

}  // namespace qclbm::carleman
