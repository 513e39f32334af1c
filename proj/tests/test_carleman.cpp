#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qclbm/carleman.hpp"
#include "qclbm/error.hpp"
#include "qclbm/lbm.hpp"
#include "support.hpp"

using namespace qclbm;
using carleman::SparseMatrix;

namespace {

std::vector<LatticeGrid> all_grids(int nx, int ny) {
  return {LatticeGrid::periodic(nx, ny), LatticeGrid::bounce_back(nx, ny),
          LatticeGrid::lid_driven(nx, ny, {0.0, 0.075})};
}

bool is_permutation(const SparseMatrix& m) {
  Eigen::VectorXi per_col = Eigen::VectorXi::Zero(m.cols());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    int in_row = 0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.value() != 1.0) return false;
      ++in_row;
      ++per_col(it.col());
    }
    if (in_row != 1) return false;
  }
  return (per_col.array() == 1).all();
}

}  // namespace

TEST_CASE("first-order collision block") {
  CHECK(carleman::build_collision_first(0.0).isIdentity(0.0));
  CHECK(carleman::build_collision_first(1.0)(0, 0) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  for (double omega : {0.0, 0.5, 1.1, 1.5, 1.99}) {
    const auto d = carleman::build_collision_first(omega);
    CHECK((d - test::collision_d(omega)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((d.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
  }
  try {
    carleman::build_collision_first(2.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnstableRelaxation);
  }
}

TEST_CASE("second-order collision tensor") {
  const auto zero = carleman::build_collision_second(0.0);
  for (int i = 0; i < kQ; ++i) CHECK(zero.slice(i).isZero(0.0));

  for (double omega : {0.7, 1.1, 1.5}) {
    const auto e = carleman::build_collision_second(omega);
    CHECK(e(0, 0, 0) == 0.0);
    for (int j = 0; j < kQ; ++j) {
      for (int k = 0; k < kQ; ++k) {
        double sum = 0.0;
        for (int i = 0; i < kQ; ++i) {
          sum += e(i, j, k);
          CHECK(e(i, j, k) == doctest::Approx(test::collision_e(omega, i, j, k)).epsilon(1e-14));
        }
        CHECK(std::abs(sum) < 1e-14);
      }
    }
  }
}

TEST_CASE("streaming matrix equals the streaming step") {
  std::mt19937_64 rng(test::kSeed + 10);
  for (const auto& grid : all_grids(5, 4)) {
    const auto s = carleman::build_streaming(grid);
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = test::random_field(grid.nx(), grid.ny(), rng);
      const Eigen::VectorXd via_matrix = s.matrix * carleman::flatten(f);
      const Eigen::VectorXd direct = carleman::flatten(lbm::stream(f, grid));
      if (grid.boundary() == BoundaryKind::LidDriven) {
        CHECK((via_matrix - direct).cwiseAbs().maxCoeff() <= 1e-14);
      } else {
        CHECK(via_matrix == direct);
      }
    }
  }
}

TEST_CASE("streaming matrix structure") {
  const auto periodic = carleman::build_streaming(LatticeGrid::periodic(4, 4)).matrix;
  CHECK(periodic.nonZeros() == 9 * 16);
  CHECK(is_permutation(periodic));

  const auto bb_grid = LatticeGrid::bounce_back(4, 4);
  const auto bb = carleman::build_streaming(bb_grid).matrix;
  CHECK(is_permutation(bb));
  // Left-wall row (n, 1) reads (n, 3).
  const auto n = static_cast<Eigen::Index>(bb_grid.site(0, 2));
  CHECK(bb.coeff(n * kQ + 1, n * kQ + 3) == 1.0);

  const auto still = carleman::build_streaming(LatticeGrid::lid_driven(4, 4, {0.0, 0.0})).matrix;
  CHECK(Eigen::MatrixXd(still) == Eigen::MatrixXd(bb));
}

TEST_CASE("first-order Carleman operator") {
  const auto periodic = LatticeGrid::periodic(4, 4);
  const auto c1 = carleman::carleman_matrix_first(periodic, 1.3);

  Eigen::VectorXd rest(periodic.state_size());
  for (std::size_t n = 0; n < periodic.sites(); ++n)
    for (int i = 0; i < kQ; ++i) rest(static_cast<Eigen::Index>(n * kQ + i)) = VelocitySet::w[i];
  CHECK((c1 * rest - rest).cwiseAbs().maxCoeff() < 1e-15);

  const auto c0 = carleman::carleman_matrix_first(periodic, 0.0);
  CHECK(Eigen::MatrixXd(c0) == Eigen::MatrixXd(carleman::build_streaming(periodic).matrix));

  for (const auto& grid : {periodic, LatticeGrid::bounce_back(5, 3)}) {
    const Eigen::MatrixXd dense(carleman::carleman_matrix_first(grid, 1.1));
    CHECK((dense.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("first-order evolution") {
  std::mt19937_64 rng(test::kSeed + 11);
  const auto grid = LatticeGrid::bounce_back(4, 4);
  const carleman::CarlemanSystem sys(grid, 1.1, 1);
  const auto f = test::random_field(4, 4, rng);
  const auto traj = carleman::evolve_carleman(carleman::make_state(f, sys), sys, 5);
  REQUIRE(traj.size() == 6);
  Eigen::VectorXd v = carleman::flatten(f);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    v = sys.first_order() * v;
    CHECK(traj[t].f == v);
    CHECK(traj[t].time_index == t);
  }

  const auto rest_grid = LatticeGrid::periodic(4, 4);
  const carleman::CarlemanSystem rest_sys(rest_grid, 1.5, 1);
  const auto rest = lbm::init_kolmogorov(rest_grid, {0.0, 0.0, 1, 1});
  const auto still = carleman::evolve_carleman(carleman::make_state(rest, rest_sys), rest_sys, 10);
  CHECK((still.back().f - carleman::flatten(rest)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rank-1 second order matches the dense recursion") {
  std::mt19937_64 rng(test::kSeed + 12);
  for (const auto& grid : all_grids(3, 3)) {
    const carleman::CarlemanSystem sys(grid, 1.1, 2);
    const auto f = test::random_field(3, 3, rng);
    const auto traj = carleman::evolve_carleman(carleman::make_state(f, sys), sys, 8);
    const test::DenseSecondOrderOracle oracle(carleman::build_streaming(grid).matrix, 1.1, grid.sites());
    const auto ref = oracle.run(carleman::flatten(f), 8);
    for (std::size_t t = 0; t < ref.size(); ++t)
      CHECK((traj[t].f - ref[t]).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("library dense second-order path agrees with the factored path") {
  std::mt19937_64 rng(test::kSeed + 13);
  const auto grid = LatticeGrid::lid_driven(3, 3, {0.0, 0.05});
  const carleman::CarlemanSystem sys(grid, 1.3, 2, true);
  const auto f = test::random_field(3, 3, rng);
  const auto dense = carleman::evolve_carleman(carleman::make_state(f, sys, true), sys, 6);
  const auto factored = carleman::evolve_carleman(carleman::make_state(f, sys), sys, 6);
  for (std::size_t t = 0; t < dense.size(); ++t)
    CHECK((dense[t].f - factored[t].f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("RMSE") {
  std::mt19937_64 rng(test::kSeed + 14);
  const auto f = test::random_field(4, 4, rng);
  const auto& v = f.values();
  CHECK(carleman::rmse(v, v) == 0.0);

  std::vector<double> scaled(v);
  for (double& x : scaled) x *= 1.01;
  CHECK(carleman::rmse(scaled, v) == doctest::Approx(0.01).epsilon(1e-12));

  std::vector<double> zero(v);
  zero[5] = 0.0;
  try {
    carleman::rmse(v, zero);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedRatio);
  }
}
