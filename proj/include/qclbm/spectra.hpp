#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qclbm/lattice.hpp"
#include "qclbm/linsys.hpp"

namespace qclbm::spectra {

using Eigen::Index;

inline constexpr Index kDefaultDimensionCap = Index{1} << 14;
inline constexpr double kDefaultBinWidth = 3.5 / 128.0;

/// Full eigendecomposition of a real symmetric matrix.
///
/// For a Hermitian embedding the decomposition is assembled from the SVD of
/// A~ (eigenpairs +-sigma with vectors (v, +-u)/sqrt2, plus +-1 pairs on the
/// padding) and the dense eigenvector matrix is never formed.
class Eigenbasis {
 public:
  static Eigenbasis from_symmetric(const Eigen::MatrixXd& a);
  static Eigenbasis from_embedding(const linsys::HermitianEmbedding& embedding,
                                   Index cap = kDefaultDimensionCap);

  Index dim() const { return values_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }

  /// Coefficients of v in the eigenbasis, ordered like eigenvalues().
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;
  /// Inverse of project().
  Eigen::VectorXd synthesize(const Eigen::VectorXd& c) const;

 private:
  Eigen::VectorXd values_;
  bool structured_ = false;
  Eigen::MatrixXd vectors_;
  // Structured form: values_ = (sigma, -sigma, +1 x pad, -1 x pad).
  Eigen::MatrixXd u_, v_;
  Index n_ = 0;
  Index pad_ = 0;
};

struct SpectrumDescriptor {
  int nx = 0;
  int ny = 0;
  BoundaryKind boundary = BoundaryKind::BounceBack;
  double omega = 0.0;
  int n_steps = 0;
  Vec2 v_lid{0.0, 0.0};
  bool substituted = false;
  int source_nx = 0;
  int source_ny = 0;

  std::string key() const;
  std::uint64_t hash() const;  // FNV-1a of key()

  static SpectrumDescriptor for_grid(const LatticeGrid& grid, double omega, int n_steps);
};

class Spectrum {
 public:
  explicit Spectrum(std::vector<double> eigenvalues, SpectrumDescriptor descriptor = {});

  const std::vector<double>& eigenvalues() const { return values_; }
  const SpectrumDescriptor& descriptor() const { return descriptor_; }
  std::size_t size() const { return values_.size(); }

  double lambda_max() const { return lambda_max_; }  // max |lambda|
  double lambda_min() const { return lambda_min_; }  // min nonzero |lambda|
  std::size_t positive_count() const;

 private:
  std::vector<double> values_;
  SpectrumDescriptor descriptor_;
  double lambda_max_ = 0.0;
  double lambda_min_ = 0.0;
};

/// All eigenvalues of A, sorted ascending.
Spectrum eigen_spectrum(const linsys::HermitianEmbedding& embedding,
                        const SpectrumDescriptor& descriptor, Index cap = kDefaultDimensionCap);

struct SpectrumHistogram {
  double bin_width = kDefaultBinWidth;
  std::vector<std::size_t> counts;  // bin k covers [k w, (k+1) w)

  std::size_t total() const;
  std::size_t count(std::size_t bin) const { return bin < counts.size() ? counts[bin] : 0; }
  double bin_lo(std::size_t bin) const { return static_cast<double>(bin) * bin_width; }
  double bin_hi(std::size_t bin) const { return static_cast<double>(bin + 1) * bin_width; }
  bool operator==(const SpectrumHistogram&) const = default;
};

SpectrumHistogram histogram(std::span<const double> eigenvalues, double bin_width = kDefaultBinWidth);
SpectrumHistogram histogram(const Spectrum& spectrum, double bin_width = kDefaultBinWidth);

/// Share of big-lattice counts that land in bins empty for the small lattice.
double zeta(const SpectrumHistogram& big, const SpectrumHistogram& small);

/// The small lattice's eigenvalues tagged for the target grid.
Spectrum substituted_spectrum(const Spectrum& small, const SpectrumDescriptor& target);

void write_histogram_csv(std::ostream& os, const SpectrumHistogram& h);

/// Spectrum cache file:
///   # qclbm-spectrum v1
///   # key=<descriptor key>
///   # count=<n>
///   <eigenvalue>              (one per line, 17 significant digits)
void write_spectrum(std::ostream& os, const Spectrum& spectrum);
Spectrum read_spectrum(std::istream& is, const SpectrumDescriptor& descriptor);

class SpectrumCache {
 public:
  explicit SpectrumCache(std::filesystem::path dir);

  std::filesystem::path path_for(const SpectrumDescriptor& descriptor) const;
  std::optional<Spectrum> load(const SpectrumDescriptor& descriptor) const;
  void store(const Spectrum& spectrum) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace qclbm::spectra
