#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

#include "qclbm/carleman.hpp"
#include "qclbm/error.hpp"
#include "qclbm/linsys.hpp"
#include "qclbm/spectra.hpp"
#include "support.hpp"

using namespace qclbm;
using spectra::SpectrumHistogram;

namespace {

linsys::HermitianEmbedding embedding_for(const LatticeGrid& grid, double omega, int n_steps) {
  std::mt19937_64 rng(test::kSeed + 30);
  const auto phi0 = carleman::flatten(test::random_field(grid.nx(), grid.ny(), rng));
  return linsys::hermitize_and_pad(
      linsys::assemble_system(carleman::carleman_matrix_first(grid, omega), phi0, n_steps));
}

SpectrumHistogram hist(double width, std::vector<std::size_t> counts) {
  return SpectrumHistogram{width, std::move(counts)};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("structured eigenbasis agrees with a dense symmetric solve") {
  const auto emb = embedding_for(LatticeGrid::lid_driven(2, 2, {0.0, 0.075}), 1.1, 2);
  const Eigen::MatrixXd a(emb.a_matrix);
  const auto structured = spectra::Eigenbasis::from_embedding(emb);
  const auto dense = spectra::Eigenbasis::from_symmetric(a);
  REQUIRE(structured.dim() == a.rows());

  std::vector<double> sv(structured.eigenvalues().begin(), structured.eigenvalues().end());
  std::sort(sv.begin(), sv.end());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    CHECK(sv[static_cast<std::size_t>(i)] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-10));
    CHECK(dense.eigenvalues()(i) == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-10));
  }

  std::mt19937_64 rng(test::kSeed + 31);
  const Eigen::VectorXd v = test::random_vector(a.rows(), rng);
  for (const auto* basis : {&structured, &dense}) {
    const Eigen::VectorXd c = basis->project(v);
    CHECK((basis->synthesize(c) - v).norm() < 1e-12 * v.norm());
    CHECK(c.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
    const Eigen::VectorXd av = basis->synthesize(basis->eigenvalues().cwiseProduct(c));
    CHECK((av - a * v).norm() < 1e-11 * v.norm());
  }
}

TEST_CASE("eigen_spectrum") {
  const auto grid = LatticeGrid::bounce_back(2, 2);
  const auto emb = embedding_for(grid, 1.1, 1);
  const auto desc = spectra::SpectrumDescriptor::for_grid(grid, 1.1, 1);
  const auto s = spectra::eigen_spectrum(emb, desc);
  REQUIRE(s.size() == static_cast<std::size_t>(emb.dim()));
  CHECK(std::is_sorted(s.eigenvalues().begin(), s.eigenvalues().end()));
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(s.eigenvalues()[i] == doctest::Approx(-s.eigenvalues()[s.size() - 1 - i]).epsilon(1e-12));
  CHECK(s.positive_count() == s.size() / 2);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(emb.a_matrix), Eigen::EigenvaluesOnly);
  CHECK(s.lambda_max() == doctest::Approx(es.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-12));
  CHECK(s.lambda_min() == doctest::Approx(es.eigenvalues().cwiseAbs().minCoeff()).epsilon(1e-10));

  const linsys::SparseMatrix zero(3, 3);
  const auto ident = linsys::hermitize_and_pad(linsys::assemble_system(zero, Eigen::VectorXd::Ones(3), 1));
  const auto pm = spectra::eigen_spectrum(ident, {});
  for (std::size_t i = 0; i < pm.size(); ++i)
    CHECK(pm.eigenvalues()[i] == doctest::Approx(i < pm.size() / 2 ? -1.0 : 1.0).epsilon(1e-14));

  CHECK(code_of([&] { spectra::eigen_spectrum(emb, desc, 64); }) == ErrorCode::DimensionCap);
  CHECK(code_of([&] { spectra::Eigenbasis::from_embedding(emb, 64); }) == ErrorCode::DimensionCap);
}

TEST_CASE("descriptor keys") {
  const auto bb = spectra::SpectrumDescriptor::for_grid(LatticeGrid::bounce_back(4, 4), 1.1, 1);
  CHECK(bb.key() == "bounceback_nx4_ny4_om1.1_nt1");
  const auto lid = spectra::SpectrumDescriptor::for_grid(LatticeGrid::lid_driven(8, 8, {0.0, 0.075}), 1.5, 3);
  CHECK(lid.key() == "liddriven_nx8_ny8_om1.5_nt3_v0,0.075");
  CHECK(bb.hash() != lid.hash());
}

TEST_CASE("histogram binning") {
  constexpr double w = spectra::kDefaultBinWidth;
  CHECK(spectra::histogram(std::vector<double>{-1.0, -0.5}).total() == 0);

  const auto one = spectra::histogram(std::vector<double>{0.05}, w);
  CHECK(one.count(1) == 1);
  CHECK(one.total() == 1);
  CHECK(one.bin_lo(1) == w);

  std::mt19937_64 rng(test::kSeed + 32);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> values(500);
  for (double& v : values) v = u(rng);
  const auto h = spectra::histogram(values, w);
  CHECK(h.total() == static_cast<std::size_t>(std::count_if(values.begin(), values.end(),
                                                            [](double v) { return v > 0.0; })));

  const auto fine = spectra::histogram(values, w / 2.0);
  CHECK(fine.total() == h.total());
  for (std::size_t k = 0; k < h.counts.size(); ++k) CHECK(fine.count(2 * k) + fine.count(2 * k + 1) == h.count(k));

  std::ostringstream os;
  spectra::write_histogram_csv(os, one);
  CHECK(os.str().find("bin_lo,bin_hi,count") != std::string::npos);
}

TEST_CASE("zeta") {
  constexpr double w = 0.1;
  const auto small = hist(w, {0, 2, 1, 0});
  const auto big = hist(w, {1, 4, 2, 0, 3});
  CHECK(spectra::zeta(big, small) == doctest::Approx(4.0 / 10.0));
  CHECK(spectra::zeta(big, big) == 0.0);
  CHECK(spectra::zeta(small, small) == 0.0);
  CHECK(spectra::zeta(small, big) == 0.0);
  CHECK(spectra::zeta(hist(w, {0, 0, 5}), hist(w, {1})) == 1.0);
  CHECK(code_of([&] { spectra::zeta(big, hist(0.2, {1})); }) == ErrorCode::MismatchedBinning);
}

TEST_CASE("spectrum substitution") {
  const auto grid = LatticeGrid::bounce_back(2, 2);
  const auto small = spectra::eigen_spectrum(embedding_for(grid, 1.1, 1),
                                             spectra::SpectrumDescriptor::for_grid(grid, 1.1, 1));
  const auto target = spectra::SpectrumDescriptor::for_grid(LatticeGrid::bounce_back(6, 6), 1.1, 1);
  const auto sub = spectra::substituted_spectrum(small, target);
  CHECK(sub.eigenvalues() == small.eigenvalues());
  CHECK(sub.lambda_max() == small.lambda_max());
  CHECK(sub.descriptor().substituted);
  CHECK(sub.descriptor().key() == "bounceback_nx6_ny6_om1.1_nt1_from2x2");

  const auto same = spectra::substituted_spectrum(small, small.descriptor());
  CHECK(same.eigenvalues() == small.eigenvalues());
}

TEST_CASE("spectrum files and cache") {
  const auto grid = LatticeGrid::lid_driven(2, 2, {0.0, 0.1});
  const auto desc = spectra::SpectrumDescriptor::for_grid(grid, 1.3, 2);
  const auto s = spectra::eigen_spectrum(embedding_for(grid, 1.3, 2), desc);

  std::stringstream ss;
  spectra::write_spectrum(ss, s);
  const auto back = spectra::read_spectrum(ss, desc);
  CHECK(back.eigenvalues() == s.eigenvalues());

  const auto other = spectra::SpectrumDescriptor::for_grid(grid, 1.1, 2);
  CHECK(code_of([&] {
          std::stringstream copy;
          spectra::write_spectrum(copy, s);
          spectra::read_spectrum(copy, other);
        }) == ErrorCode::Io);

  const auto dir = std::filesystem::temp_directory_path() / "qclbm_spectra_cache_test";
  std::filesystem::remove_all(dir);
  const spectra::SpectrumCache cache(dir);
  CHECK_FALSE(cache.load(desc).has_value());
  cache.store(s);
  const auto loaded = cache.load(desc);
  REQUIRE(loaded.has_value());
  CHECK(loaded->eigenvalues() == s.eigenvalues());
  CHECK(cache.path_for(desc).parent_path() == dir);
  CHECK_FALSE(cache.load(other).has_value());
  std::filesystem::remove_all(dir);
}
