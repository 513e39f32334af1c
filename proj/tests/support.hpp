#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>

#include "qclbm/lattice.hpp"
#include "qclbm/lbm.hpp"

namespace qclbm::test {

inline constexpr std::uint64_t kSeed = 20240611;

// Positive populations near equilibrium with a random flow.
inline DistributionField random_field(int nx, int ny, std::mt19937_64& rng, double spread = 0.1) {
  std::uniform_real_distribution<double> rho(0.9, 1.1);
  std::uniform_real_distribution<double> vel(-0.05, 0.05);
  std::uniform_real_distribution<double> noise(-spread, spread);
  DistributionField f(nx, ny);
  for (std::size_t n = 0; n < f.sites(); ++n) {
    const auto feq = lbm::equilibrium(rho(rng), {vel(rng), vel(rng)});
    for (int i = 0; i < kQ; ++i) f(n, i) = feq[i] * (1.0 + noise(rng));
  }
  return f;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// Random real symmetric matrix with the given spectrum.
inline Eigen::MatrixXd with_spectrum(const Eigen::VectorXd& values, std::mt19937_64& rng) {
  const Eigen::Index n = values.size();
  Eigen::MatrixXd m(n, n);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd a = q * values.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

// D_ij evaluated directly from the stencil.
inline Eigen::MatrixXd collision_d(double omega) {
  constexpr double cs2 = VelocitySet::kCs2;
  Eigen::MatrixXd d(kQ, kQ);
  for (int i = 0; i < kQ; ++i)
    for (int j = 0; j < kQ; ++j)
      d(i, j) = (i == j ? 1.0 - omega : 0.0) +
                omega * VelocitySet::w[i] * (1.0 + VelocitySet::dot(i, j) / cs2);
  return d;
}

inline double collision_e(double omega, int i, int j, int k) {
  constexpr double cs2 = VelocitySet::kCs2;
  const double eij = VelocitySet::dot(i, j);
  const double eik = VelocitySet::dot(i, k);
  const double ejk = VelocitySet::dot(j, k);
  return omega * VelocitySet::w[i] / (cs2 * cs2) * (eij * eik - cs2 * ejk);
}

// Second-order Carleman recursion with the pair state g materialized as a
// (QL)^2 vector and S (x) S, D (x) D built as explicit Kronecker products.
class DenseSecondOrderOracle {
 public:
  using Sparse = Eigen::SparseMatrix<double>;

  DenseSecondOrderOracle(const Sparse& s, double omega, std::size_t sites) : s_(s) {
    const Eigen::Index ql = static_cast<Eigen::Index>(sites) * kQ;
    const Eigen::MatrixXd d = collision_d(omega);
    std::vector<Eigen::Triplet<double>> bd, pair;
    for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(sites); ++n) {
      for (int i = 0; i < kQ; ++i) {
        for (int j = 0; j < kQ; ++j) {
          bd.emplace_back(n * kQ + i, n * kQ + j, d(i, j));
          for (int k = 0; k < kQ; ++k) {
            const double e = collision_e(omega, i, j, k);
            if (e != 0.0) pair.emplace_back(n * kQ + i, (n * kQ + j) * ql + n * kQ + k, e);
          }
        }
      }
    }
    bd_.resize(ql, ql);
    bd_.setFromTriplets(bd.begin(), bd.end());
    pair_.resize(ql, ql * ql);
    pair_.setFromTriplets(pair.begin(), pair.end());
    Sparse ss = Eigen::kroneckerProduct(s_, s_);
    Sparse dd = Eigen::kroneckerProduct(bd_, bd_);
    pair_step_ = ss * dd;
  }

  // f(t) for t = 0 .. steps.
  std::vector<Eigen::VectorXd> run(const Eigen::VectorXd& f0, int steps) const {
    const Eigen::Index ql = f0.size();
    Eigen::VectorXd g(ql * ql);
    for (Eigen::Index a = 0; a < ql; ++a) g.segment(a * ql, ql) = f0(a) * f0;
    std::vector<Eigen::VectorXd> out{f0};
    Eigen::VectorXd f = f0;
    for (int t = 0; t < steps; ++t) {
      Eigen::VectorXd post = bd_ * f + pair_ * g;
      f = s_ * post;
      Eigen::VectorXd g_next = pair_step_ * g;
      g = std::move(g_next);
      out.push_back(f);
    }
    return out;
  }

 private:
  Sparse s_;
  Sparse bd_;
  Sparse pair_;
  Sparse pair_step_;
};

}  // namespace qclbm::test
