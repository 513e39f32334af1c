#include "qclbm/cli/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "qclbm/error.hpp"

namespace qclbm::cli {

spectra::SpectrumDescriptor PreparedSystem::descriptor() const {
  return spectra::SpectrumDescriptor::for_grid(grid, omega, n_steps);
}

namespace {

Eigen::VectorXd pre_evolve(const carleman::SparseMatrix& c, const DistributionField& initial, int t0) {
  Eigen::VectorXd phi = carleman::flatten(initial);
  for (int t = 0; t < t0; ++t) phi = c * phi;
  return phi;
}

void fill_solution(PreparedSystem& p) {
  p.x_exact = linsys::classical_solve(p.system);
  p.x_embedded = linsys::embed_solution(p.embedding, p.x_exact);
}

}  // namespace

PreparedSystem prepare_system(const LatticeGrid& grid, double omega, int n_steps, int t0,
                              const DistributionField& initial) {
  if (t0 < 0) throw Error(ErrorCode::InvalidArgument, "t0 must be >= 0");
  if (!initial.matches(grid)) throw Error(ErrorCode::InvalidArgument, "initial field does not match grid");
  const auto c = carleman::carleman_matrix_first(grid, omega);
  PreparedSystem p{grid, omega, n_steps, t0, {}, {}, {}, {}};
  p.system = linsys::assemble_system(c, pre_evolve(c, initial, t0), n_steps);
  p.embedding = linsys::hermitize_and_pad(p.system);
  fill_solution(p);
  return p;
}

PreparedSystem with_t0(const PreparedSystem& base, int t0, const DistributionField& initial) {
  if (t0 < 0) throw Error(ErrorCode::InvalidArgument, "t0 must be >= 0");
  PreparedSystem p = base;
  p.t0 = t0;
  const Eigen::VectorXd phi0 = pre_evolve(base.system.step_operator, initial, t0);
  p.system.rhs = linsys::assemble_b(phi0, base.n_steps);
  p.embedding.rhs.setZero();
  p.embedding.rhs.segment(p.embedding.padded_dim, p.embedding.unpadded_dim) = p.system.rhs;
  fill_solution(p);
  return p;
}

std::vector<double> evolved_block_errors(const HhlRun& run) {
  if (run.block_errors.size() < 2) return {};
  return {run.block_errors.begin() + 1, run.block_errors.end()};
}

double median(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

HhlRun run_prepared(const PreparedSystem& prepared, const spectra::Eigenbasis& basis,
                    const spectra::Spectrum& rotation_spectrum, const hhl::HhlConfig& config) {
  HhlRun run;
  run.n_clock_min = hhl::clock_minimum(rotation_spectrum);
  run.result = hhl::run_hhl(basis, prepared.embedding.rhs, rotation_spectrum, config, &prepared.x_embedded);
  run.block_errors = hhl::block_fidelity_errors(run.result.solution_state, prepared.x_exact,
                                                prepared.system.block_dim);
  return run;
}

spectra::Spectrum spectrum_from_basis(const spectra::Eigenbasis& basis,
                                      const spectra::SpectrumDescriptor& descriptor) {
  const auto& ev = basis.eigenvalues();
  return spectra::Spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()), descriptor);
}

SpectrumProvider::SpectrumProvider(std::optional<spectra::SpectrumCache> cache, Eigen::Index cap)
    : cache_(std::move(cache)), cap_(cap) {}

spectra::Spectrum SpectrumProvider::get(const LatticeGrid& grid, double omega, int n_steps) {
  const auto desc = spectra::SpectrumDescriptor::for_grid(grid, omega, n_steps);
  {
    std::lock_guard lock(mutex_);
    keys_.push_back(desc.key());
  }
  if (cache_) {
    if (auto hit = cache_->load(desc)) return *hit;
  }
  const auto c = carleman::carleman_matrix_first(grid, omega);
  const auto emb = linsys::hermitize_and_pad(linsys::assemble_tilde_a(c, n_steps));
  auto s = spectra::eigen_spectrum(emb, desc, cap_);
  if (cache_) cache_->store(s);
  return s;
}

void SpectrumProvider::note(const spectra::SpectrumDescriptor& descriptor) {
  std::lock_guard lock(mutex_);
  keys_.push_back(descriptor.key());
}

std::vector<std::string> SpectrumProvider::keys() const {
  std::lock_guard lock(mutex_);
  auto k = keys_;
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

void run_parallel(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, threads));
  if (count == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace qclbm::cli
