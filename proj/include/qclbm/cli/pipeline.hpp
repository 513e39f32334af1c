#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qclbm/carleman.hpp"
#include "qclbm/hhl.hpp"
#include "qclbm/linsys.hpp"
#include "qclbm/spectra.hpp"

namespace qclbm::cli {

/// One (grid, omega, N_t) linear system with its start state after t0
/// pre-evolution steps of the first-order Carleman operator.
struct PreparedSystem {
  LatticeGrid grid;
  double omega = 0.0;
  int n_steps = 0;
  int t0 = 0;
  linsys::TimeBlockSystem system;
  linsys::HermitianEmbedding embedding;
  Eigen::VectorXd x_exact;     // forward substitution
  Eigen::VectorXd x_embedded;  // (x, 0)

  spectra::SpectrumDescriptor descriptor() const;
};

PreparedSystem prepare_system(const LatticeGrid& grid, double omega, int n_steps, int t0,
                              const DistributionField& initial);

/// Re-targets a prepared system to a new t0 without rebuilding the matrices.
PreparedSystem with_t0(const PreparedSystem& base, int t0, const DistributionField& initial);

struct HhlRun {
  hhl::HhlResult result;
  std::vector<double> block_errors;  // block k covers t0 + k
  int n_clock_min = 0;
};

/// Evolved-block errors: every block after the first.
std::vector<double> evolved_block_errors(const HhlRun& run);
double median(std::vector<double> values);

HhlRun run_prepared(const PreparedSystem& prepared, const spectra::Eigenbasis& basis,
                    const spectra::Spectrum& rotation_spectrum, const hhl::HhlConfig& config);

/// Spectrum of the system's A built from an existing basis (no refactorization).
spectra::Spectrum spectrum_from_basis(const spectra::Eigenbasis& basis,
                                      const spectra::SpectrumDescriptor& descriptor);

/// Computes spectra through an optional on-disk cache. Safe to share across
/// worker threads.
class SpectrumProvider {
 public:
  explicit SpectrumProvider(std::optional<spectra::SpectrumCache> cache = std::nullopt,
                            Eigen::Index cap = spectra::kDefaultDimensionCap);

  spectra::Spectrum get(const LatticeGrid& grid, double omega, int n_steps);
  /// Records the key of a spectrum computed outside the provider. Such
  /// spectra are not cached, so cached files never depend on command order.
  void note(const spectra::SpectrumDescriptor& descriptor);
  std::vector<std::string> keys() const;

 private:
  std::optional<spectra::SpectrumCache> cache_;
  Eigen::Index cap_;
  mutable std::mutex mutex_;
  std::vector<std::string> keys_;
};

/// Runs fn(0..n-1) on up to `threads` workers. Results are indexed by task,
/// so the merge order never depends on scheduling. The first exception, in
/// task order, is rethrown after all workers finish.
void run_parallel(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace qclbm::cli
